//! Steady-state frequency response of the two-mass wagon-bogie system.
//!
//! The wagon (mass `M`) rides on the bogie (mass `m`) through the secondary
//! suspension (stiffness `K`, damping `C`); the bogie rides on the wheels
//! through the primary suspension (stiffness `N`, damping `D`). The wheels
//! follow the rail height `z(t)`:
//!
//! ```text
//! M x'' + K (x - y) + C (x' - y') = 0
//! m y'' + N (y - z) + D (y' - z') - K (x - y) - C (x' - y') = 0
//! ```
//!
//! Under sinusoidal excitation `z = A e^{i omega t}` the ansatz
//! `x = x0 e^{i omega t}`, `y = y0 e^{i omega t}` reduces the ODEs to a 2x2
//! complex linear system with the dynamic stiffnesses `Kt = K + i omega C`
//! and `Nt = N + i omega D`:
//!
//! ```text
//! det(S) = (omega^2 M - Kt)(omega^2 m - Nt - Kt) - Kt^2
//! x0 = Kt Nt A / det(S)
//! y0 = -(omega^2 M - Kt) Nt A / det(S)
//! ```
//!
//! Physical displacements are the real parts `Re{x0 e^{i omega t}}`; the
//! reported amplitude is `|x0|`. Where `det(S)` vanishes (the undamped system
//! driven exactly at a natural frequency) no bounded steady state exists and
//! [`respond`] refuses with [`FreqResponseError::ResonantSingularity`].

use std::fmt;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

/// Masses, stiffnesses, and dampings of the wagon-bogie suspension chain.
///
/// All values are SI: kilograms, newtons per metre, newton-seconds per metre.
/// `Default` is the NT-11 parameter set used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Wagon (car body) mass `M` in kg.
    pub wagon_mass: f64,
    /// Bogie mass `m` in kg.
    pub bogie_mass: f64,
    /// Wagon-bogie (secondary) spring stiffness `K` in N/m.
    pub secondary_stiffness: f64,
    /// Bogie-wheel (primary) spring stiffness `N` in N/m.
    pub primary_stiffness: f64,
    /// Wagon-bogie (secondary) damping `C` in N·s/m.
    pub secondary_damping: f64,
    /// Bogie-wheel (primary) damping `D` in N·s/m.
    pub primary_damping: f64,
}

impl Default for VehicleParams {
    /// NT-11 defaults: M = 11 200 kg, m = 1 010 kg, K = 963 kN/m,
    /// N = 1 540 kN/m, C = 50 kN·s/m, D = 0.
    fn default() -> Self {
        Self {
            wagon_mass: 11_200.0,
            bogie_mass: 1_010.0,
            secondary_stiffness: 963_000.0,
            primary_stiffness: 1_540_000.0,
            secondary_damping: 50_000.0,
            primary_damping: 0.0,
        }
    }
}

impl VehicleParams {
    pub fn new(
        wagon_mass: f64,
        bogie_mass: f64,
        secondary_stiffness: f64,
        primary_stiffness: f64,
        secondary_damping: f64,
        primary_damping: f64,
    ) -> Result<Self, ParamsError> {
        let params = Self {
            wagon_mass,
            bogie_mass,
            secondary_stiffness,
            primary_stiffness,
            secondary_damping,
            primary_damping,
        };
        params.validate()?;
        Ok(params)
    }

    /// Masses and stiffnesses must be positive; dampings nonnegative. All
    /// finite.
    pub fn validate(&self) -> Result<(), ParamsError> {
        let positive: [(&'static str, f64); 4] = [
            ("wagon_mass", self.wagon_mass),
            ("bogie_mass", self.bogie_mass),
            ("secondary_stiffness", self.secondary_stiffness),
            ("primary_stiffness", self.primary_stiffness),
        ];
        for (field, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ParamsError::InvalidParam { field, value });
            }
        }
        let nonnegative: [(&'static str, f64); 2] = [
            ("secondary_damping", self.secondary_damping),
            ("primary_damping", self.primary_damping),
        ];
        for (field, value) in nonnegative {
            if value < 0.0 || !value.is_finite() {
                return Err(ParamsError::InvalidParam { field, value });
            }
        }
        Ok(())
    }

    /// Same springs and masses with both dampings removed.
    pub fn undamped(&self) -> Self {
        Self {
            secondary_damping: 0.0,
            primary_damping: 0.0,
            ..*self
        }
    }

    /// Read parameters from a flat `key = value` config file.
    ///
    /// Recognised keys (one per line, `#` comments allowed):
    ///
    /// ```text
    /// M_kg | M_t              wagon mass (kg, or metric tonnes)
    /// m_kg | m_t              bogie mass
    /// K_N_per_m | K_kN_per_m  secondary stiffness (N/m or kN/m)
    /// N_N_per_m | N_kN_per_m  primary stiffness
    /// C_Ns_per_m | C_kNs_per_m secondary damping (N·s/m or kN·s/m)
    /// D_Ns_per_m | D_kNs_per_m primary damping
    /// ```
    ///
    /// Missing keys keep their defaults; unknown or repeated keys are errors
    /// so that typos cannot silently fall back to defaults. Tonnes and
    /// kilonewtons are converted to SI at ingestion.
    pub fn from_config_path<P: AsRef<Path>>(path: P) -> Result<Self, ParamsError> {
        let text = fs::read_to_string(path.as_ref())
            .map_err(|e| ParamsError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_config_str(&text)
    }

    pub fn from_config_str(text: &str) -> Result<Self, ParamsError> {
        let mut params = Self::default();
        let mut seen: Vec<&'static str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value_text) = line.split_once('=').ok_or_else(|| ParamsError::Config {
                line: idx + 1,
                message: format!("expected \"key = value\", got {raw:?}"),
            })?;
            let key = key.trim();
            let value: f64 = value_text.trim().parse().map_err(|_| ParamsError::Config {
                line: idx + 1,
                message: format!("invalid number {:?} for key {key}", value_text.trim()),
            })?;
            // Each key names the quantity, the unit suffix picks the scale.
            let (field, target, scale): (&'static str, &mut f64, f64) = match key {
                "M_kg" => ("wagon_mass", &mut params.wagon_mass, 1.0),
                "M_t" => ("wagon_mass", &mut params.wagon_mass, 1000.0),
                "m_kg" => ("bogie_mass", &mut params.bogie_mass, 1.0),
                "m_t" => ("bogie_mass", &mut params.bogie_mass, 1000.0),
                "K_N_per_m" => ("secondary_stiffness", &mut params.secondary_stiffness, 1.0),
                "K_kN_per_m" => (
                    "secondary_stiffness",
                    &mut params.secondary_stiffness,
                    1000.0,
                ),
                "N_N_per_m" => ("primary_stiffness", &mut params.primary_stiffness, 1.0),
                "N_kN_per_m" => ("primary_stiffness", &mut params.primary_stiffness, 1000.0),
                "C_Ns_per_m" => ("secondary_damping", &mut params.secondary_damping, 1.0),
                "C_kNs_per_m" => ("secondary_damping", &mut params.secondary_damping, 1000.0),
                "D_Ns_per_m" => ("primary_damping", &mut params.primary_damping, 1.0),
                "D_kNs_per_m" => ("primary_damping", &mut params.primary_damping, 1000.0),
                _ => {
                    return Err(ParamsError::Config {
                        line: idx + 1,
                        message: format!("unknown key {key:?}"),
                    })
                }
            };
            if seen.contains(&field) {
                return Err(ParamsError::Config {
                    line: idx + 1,
                    message: format!("{field} set twice (key {key:?})"),
                });
            }
            seen.push(field);
            *target = value * scale;
        }
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamsError {
    /// A mass/stiffness/damping outside its valid range.
    InvalidParam { field: &'static str, value: f64 },
    /// Config file syntax or key problem, with 1-based line number.
    Config { line: usize, message: String },
    /// Config file could not be read.
    Io(String),
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamsError::InvalidParam { field, value } => {
                write!(f, "invalid parameter: {field} = {value}")
            }
            ParamsError::Config { line, message } => {
                write!(f, "config line {line}: {message}")
            }
            ParamsError::Io(msg) => write!(f, "config file: {msg}"),
        }
    }
}

impl std::error::Error for ParamsError {}

#[derive(Debug, Clone, PartialEq)]
pub enum FreqResponseError {
    /// `|det(S)|` fell below the singularity tolerance: the undamped system
    /// is being driven at (or numerically at) a natural frequency and has no
    /// bounded steady state.
    ResonantSingularity {
        omega: f64,
        det_magnitude: f64,
        tolerance: f64,
    },
}

impl fmt::Display for FreqResponseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreqResponseError::ResonantSingularity {
                omega,
                det_magnitude,
                tolerance,
            } => write!(
                f,
                "resonant singularity at omega = {omega} rad/s: |det(S)| = {det_magnitude} < {tolerance}"
            ),
        }
    }
}

impl std::error::Error for FreqResponseError {}

/// Complex steady-state amplitudes of wagon and bogie at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyResponse {
    /// Forcing frequency in rad/s.
    pub omega: f64,
    /// Complex wagon amplitude (m); physical motion `Re{x0 e^{i omega t}}`.
    pub x0: Complex64,
    /// Complex bogie amplitude (m).
    pub y0: Complex64,
    /// System determinant at this frequency.
    pub det_s: Complex64,
    /// Rail forcing amplitude `A` in m.
    pub forcing_amplitude: f64,
}

impl FrequencyResponse {
    /// Residuals of the two frequency-domain equations at the stored
    /// solution. Both magnitudes stay below `1e-10 * K * A` for well-posed
    /// inputs; larger values indicate conditioning trouble near a resonance.
    pub fn residuals(&self, params: &VehicleParams) -> (Complex64, Complex64) {
        let (kt, nt) = dynamic_stiffnesses(params, self.omega);
        let w2 = self.omega * self.omega;
        let a = Complex64::new(self.forcing_amplitude, 0.0);
        let r1 = (kt - w2 * params.wagon_mass) * self.x0 - kt * self.y0;
        let r2 = (nt + kt - w2 * params.bogie_mass) * self.y0 - kt * self.x0 - nt * a;
        (r1, r2)
    }
}

/// Amplitude ratios and phases of the response, normalised by the forcing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMagnitudes {
    /// `|x0 / A|`: wagon amplitude per unit rail amplitude.
    pub mag_x: f64,
    /// `|y0 / A|`: bogie amplitude per unit rail amplitude.
    pub mag_y: f64,
    /// Phase of the wagon motion relative to the forcing, rad.
    pub phase_x: f64,
    /// Phase of the bogie motion relative to the forcing, rad.
    pub phase_y: f64,
}

fn dynamic_stiffnesses(params: &VehicleParams, omega: f64) -> (Complex64, Complex64) {
    let kt = Complex64::new(params.secondary_stiffness, omega * params.secondary_damping);
    let nt = Complex64::new(params.primary_stiffness, omega * params.primary_damping);
    (kt, nt)
}

/// Determinant of the 2x2 frequency-domain system,
/// `(omega^2 M - Kt)(omega^2 m - Nt - Kt) - Kt^2`.
///
/// Real and equal to `K*N` at `omega = 0`; zero exactly at the undamped
/// natural frequencies when `C = D = 0`.
pub fn det_s(params: &VehicleParams, omega: f64) -> Complex64 {
    let (kt, nt) = dynamic_stiffnesses(params, omega);
    let w2 = omega * omega;
    (w2 * params.wagon_mass - kt) * (w2 * params.bogie_mass - nt - kt) - kt * kt
}

/// Singularity tolerance on `|det(S)|`, scaled by its static value `K*N`.
fn singularity_tolerance(params: &VehicleParams) -> f64 {
    1e-9 * params.secondary_stiffness * params.primary_stiffness
}

/// Steady-state response to rail forcing `z = A cos(omega t)`.
///
/// Solves the 2x2 system by its closed-form adjugate. Fails with
/// [`FreqResponseError::ResonantSingularity`] when `|det(S)|` drops below
/// `1e-9 * K * N`, which only happens if the undamped system is driven at a
/// natural frequency; any `C > 0` keeps the determinant bounded away from
/// zero.
pub fn respond(
    params: &VehicleParams,
    omega: f64,
    amplitude_m: f64,
) -> Result<FrequencyResponse, FreqResponseError> {
    let det = det_s(params, omega);
    let tolerance = singularity_tolerance(params);
    if det.norm() < tolerance {
        return Err(FreqResponseError::ResonantSingularity {
            omega,
            det_magnitude: det.norm(),
            tolerance,
        });
    }
    let (kt, nt) = dynamic_stiffnesses(params, omega);
    let w2 = omega * omega;
    let a = Complex64::new(amplitude_m, 0.0);
    let x0 = kt * nt * a / det;
    let y0 = -(w2 * params.wagon_mass - kt) * nt * a / det;
    Ok(FrequencyResponse {
        omega,
        x0,
        y0,
        det_s: det,
        forcing_amplitude: amplitude_m,
    })
}

/// Amplitude ratios `|x0/A|`, `|y0/A|` and phases, independent of `A`.
pub fn transfer_magnitudes(
    params: &VehicleParams,
    omega: f64,
) -> Result<TransferMagnitudes, FreqResponseError> {
    // Unit forcing: ratios and phases are A-independent by linearity.
    let response = respond(params, omega, 1.0)?;
    Ok(TransferMagnitudes {
        mag_x: response.x0.norm(),
        mag_y: response.y0.norm(),
        phase_x: response.x0.arg(),
        phase_y: response.y0.arg(),
    })
}
