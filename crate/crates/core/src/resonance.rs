//! Resonance frequencies of the wagon-bogie system and the train speeds that
//! excite them.
//!
//! With damping removed, the frequency-domain determinant of the two-mass
//! system vanishes at the roots of
//!
//! ```text
//! M m w^4 - [M (N + K) + m K] w^2 + K N = 0
//! ```
//!
//! a quadratic in `w^2` with two real positive roots: a low mode where wagon
//! and bogie ride the springs in series, and a high mode where the light
//! bogie oscillates between both springs. Because the mass ratio
//! `epsilon = m / M` is small (about 0.09 for the default parameters), the
//! roots are close to two closed-form asymptotics:
//!
//! ```text
//! f_L = (1 / 2 pi) sqrt(N K / ((N + K) M))    (series-spring wagon mode)
//! f_h = (1 / 2 pi) sqrt((N + K) / m)          (bogie-between-springs mode)
//! ```
//!
//! A profile with section length `L` forces a train at speed `u` at
//! `f = u / L`, so each resonance frequency maps to a critical speed
//! `u = f L`. For the default parameter set the low mode sits near 104 km/h,
//! inside the normal 90-110 km/h operating band; [`speed_sweep`] tabulates
//! the damped transfer magnitudes across that band and flags the peak.

use std::f64::consts::TAU;
use std::fmt;

use serde_json::{json, Value};

use crate::format::{fmt_csv, report_f64};
use crate::freq_response::{self, FreqResponseError, VehicleParams};
use crate::kinematics::forcing_frequency;

#[derive(Debug, Clone, PartialEq)]
pub enum ResonanceError {
    /// The characteristic quadratic lost its real roots numerically. Cannot
    /// occur for valid parameters; guarded anyway.
    DegenerateParams { discriminant: f64 },
    /// Sweep range or grid is unusable.
    InvalidRange { message: String },
}

impl fmt::Display for ResonanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResonanceError::DegenerateParams { discriminant } => {
                write!(f, "characteristic discriminant negative: {discriminant}")
            }
            ResonanceError::InvalidRange { message } => write!(f, "invalid range: {message}"),
        }
    }
}

impl std::error::Error for ResonanceError {}

/// A train speed in both SI and operational units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSpeed {
    /// Metres per second.
    pub mps: f64,
    /// Kilometres per hour, exactly `3.6 * mps`.
    pub kmh: f64,
}

/// Dimensionless grouping of the characteristic equation.
///
/// In terms of `epsilon = m/M`, `Lambda = (N+K)/K`, and
/// `Omega^2 = w^2 M / K`, the characteristic equation collapses to
/// `(Omega^2 - 1)(epsilon Omega^2 - Lambda) - 1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondimensionalForm {
    /// Mass ratio `m / M`.
    pub epsilon: f64,
    /// Stiffness ratio `(N + K) / K`; always above 1.
    pub lambda: f64,
    /// Squared frequency ratio `w^2 M / K`.
    pub omega_squared: f64,
}

impl NondimensionalForm {
    /// Value of `(Omega^2 - 1)(epsilon Omega^2 - Lambda) - 1`; zero (to
    /// rounding) exactly when `omega` is an undamped resonance root.
    pub fn characteristic_residual(&self) -> f64 {
        (self.omega_squared - 1.0) * (self.epsilon * self.omega_squared - self.lambda) - 1.0
    }
}

/// Exact and asymptotic resonance frequencies with the critical speeds they
/// imply on a given section length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceReport {
    /// Lower root of the undamped characteristic equation, Hz.
    pub f_exact_low_hz: f64,
    /// Upper root, Hz.
    pub f_exact_high_hz: f64,
    /// Series-spring wagon-mode asymptotic `f_L`, Hz.
    pub f_asymptotic_low_hz: f64,
    /// Bogie-mode asymptotic `f_h`, Hz.
    pub f_asymptotic_high_hz: f64,
    /// Speed exciting the low mode, from the asymptotic frequency.
    pub u_crit_low: CriticalSpeed,
    /// Speed exciting the high mode, from the asymptotic frequency.
    pub u_crit_high: CriticalSpeed,
    /// Rail section length the speeds refer to, m.
    pub section_length_m: f64,
}

impl ResonanceReport {
    /// Full report for one parameter set and section length.
    ///
    /// The critical speeds are derived from the asymptotic frequencies — the
    /// design-level numbers the report is meant to surface; the exact roots
    /// are included alongside and sit within a small-`epsilon` correction
    /// (under 1% for the defaults).
    pub fn compute(params: &VehicleParams, section_length_m: f64) -> Result<Self, ResonanceError> {
        if !(section_length_m > 0.0) || !section_length_m.is_finite() {
            return Err(ResonanceError::InvalidRange {
                message: format!("section length must be positive, got {section_length_m}"),
            });
        }
        let (f_exact_low_hz, f_exact_high_hz) = undamped_resonance_exact(params)?;
        let f_asymptotic_low_hz = asymptotic_low(params);
        let f_asymptotic_high_hz = asymptotic_high(params);
        Ok(Self {
            f_exact_low_hz,
            f_exact_high_hz,
            f_asymptotic_low_hz,
            f_asymptotic_high_hz,
            u_crit_low: critical_speed(f_asymptotic_low_hz, section_length_m),
            u_crit_high: critical_speed(f_asymptotic_high_hz, section_length_m),
            section_length_m,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "f_exact_low_hz": report_f64(self.f_exact_low_hz),
            "f_exact_high_hz": report_f64(self.f_exact_high_hz),
            "f_asymptotic_low_hz": report_f64(self.f_asymptotic_low_hz),
            "f_asymptotic_high_hz": report_f64(self.f_asymptotic_high_hz),
            "u_crit_low_mps": report_f64(self.u_crit_low.mps),
            "u_crit_low_kmh": report_f64(self.u_crit_low.kmh),
            "u_crit_high_mps": report_f64(self.u_crit_high.mps),
            "u_crit_high_kmh": report_f64(self.u_crit_high.kmh),
            "section_length_m": report_f64(self.section_length_m),
        })
    }
}

/// One speed sample of a [`speed_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub u_kmh: f64,
    pub omega_rad_s: f64,
    /// `|x0/A|`; infinite on a singular row.
    pub mag_x: f64,
    /// `|y0/A|`; infinite on a singular row.
    pub mag_y: f64,
    /// Marks the strict maximum of `mag_x` over the non-singular rows
    /// (lowest speed wins a tie). At most one row per sweep.
    pub is_peak: bool,
    /// The undamped system was driven exactly at a natural frequency here;
    /// no bounded steady state exists.
    pub singular: bool,
}

/// Transfer magnitudes tabulated over a speed range, with the resonance
/// summary for the same parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub report: ResonanceReport,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Index and row of the flagged peak, if any row is non-singular.
    pub fn peak(&self) -> Option<(usize, &SweepRow)> {
        self.rows.iter().enumerate().find(|(_, row)| row.is_peak)
    }

    /// Plot-ready CSV. Singular rows print `inf` magnitudes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u_kmh,omega_rad_s,mag_x,mag_y,is_peak\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_csv(row.u_kmh),
                fmt_csv(row.omega_rad_s),
                fmt_csv(row.mag_x),
                fmt_csv(row.mag_y),
                row.is_peak
            ));
        }
        out
    }

    /// JSON form embedding the resonance report. Infinite magnitudes on
    /// singular rows serialize as `null`.
    pub fn to_json(&self) -> Value {
        json!({
            "report": self.report.to_json(),
            "rows": self.rows.iter().map(|row| json!({
                "u_kmh": report_f64(row.u_kmh),
                "omega_rad_s": report_f64(row.omega_rad_s),
                "mag_x": report_f64(row.mag_x),
                "mag_y": report_f64(row.mag_y),
                "is_peak": row.is_peak,
                "singular": row.singular,
            })).collect::<Vec<_>>(),
        })
    }
}

/// The two positive roots of the undamped characteristic equation, in Hz,
/// ascending.
///
/// Damping is ignored (the analytical roots exist only for `C = D = 0`);
/// masses and stiffnesses are assumed valid per
/// [`VehicleParams::validate`]. The quadratic in `w^2` is solved in the
/// numerically stable order: the large root via the quadratic formula (the
/// `-b` term and the square root have equal signs, so nothing cancels), the
/// small root via the root product `c/a`, which stays accurate even for tiny
/// mass ratios.
pub fn undamped_resonance_exact(params: &VehicleParams) -> Result<(f64, f64), ResonanceError> {
    let a = params.wagon_mass * params.bogie_mass;
    let b = -(params.wagon_mass * (params.primary_stiffness + params.secondary_stiffness)
        + params.bogie_mass * params.secondary_stiffness);
    let c = params.secondary_stiffness * params.primary_stiffness;
    let discriminant = b * b - 4.0 * a * c;
    if discriminant < 0.0 {
        return Err(ResonanceError::DegenerateParams { discriminant });
    }
    let omega2_high = (-b + discriminant.sqrt()) / (2.0 * a);
    let omega2_low = c / (a * omega2_high);
    Ok((omega2_low.sqrt() / TAU, omega2_high.sqrt() / TAU))
}

/// Low-mode asymptotic `f_L = (1/2 pi) sqrt(N K / ((N + K) M))` in Hz: the
/// wagon rides the two springs in series, the bogie mass dropped.
pub fn asymptotic_low(params: &VehicleParams) -> f64 {
    let series = params.primary_stiffness * params.secondary_stiffness
        / (params.primary_stiffness + params.secondary_stiffness);
    (series / params.wagon_mass).sqrt() / TAU
}

/// High-mode asymptotic `f_h = (1/2 pi) sqrt((N + K) / m)` in Hz: the bogie
/// oscillates between both springs, the wagon held still.
pub fn asymptotic_high(params: &VehicleParams) -> f64 {
    ((params.primary_stiffness + params.secondary_stiffness) / params.bogie_mass).sqrt() / TAU
}

/// Train speed `u = f L` exciting frequency `f` on sections of length `L`.
pub fn critical_speed(frequency_hz: f64, section_length_m: f64) -> CriticalSpeed {
    let kmh = 3.6 * (frequency_hz * section_length_m);
    // m/s re-derived from km/h so the two fields stay in exact 3.6 ratio.
    CriticalSpeed {
        mps: kmh / 3.6,
        kmh,
    }
}

/// Dimensionless form of the characteristic equation at one frequency.
pub fn nondimensionalize(params: &VehicleParams, omega: f64) -> NondimensionalForm {
    NondimensionalForm {
        epsilon: params.bogie_mass / params.wagon_mass,
        lambda: (params.primary_stiffness + params.secondary_stiffness)
            / params.secondary_stiffness,
        omega_squared: omega * omega * params.wagon_mass / params.secondary_stiffness,
    }
}

/// Tabulate the damped transfer magnitudes over a uniform speed grid.
///
/// Each speed maps to a forcing frequency `w = 2 pi u / L`; the magnitudes
/// are amplitude ratios (per unit rail amplitude), evaluated at the physical
/// amplitude `amplitude_m` and normalised, which by linearity is equivalent
/// for any `A > 0`. Grid rows that hit an exact undamped singularity are
/// flagged [`SweepRow::singular`] (with infinite magnitudes) rather than
/// aborting the sweep; the peak flag goes to the strict maximum of `mag_x`
/// over the remaining rows.
pub fn speed_sweep(
    params: &VehicleParams,
    section_length_m: f64,
    amplitude_m: f64,
    u_from_kmh: f64,
    u_to_kmh: f64,
    steps: usize,
) -> Result<SweepTable, ResonanceError> {
    let invalid = |message: String| ResonanceError::InvalidRange { message };
    if !(section_length_m > 0.0) || !section_length_m.is_finite() {
        return Err(invalid(format!(
            "section length must be positive, got {section_length_m}"
        )));
    }
    if !(amplitude_m > 0.0) || !amplitude_m.is_finite() {
        return Err(invalid(format!(
            "amplitude must be positive, got {amplitude_m}"
        )));
    }
    if !u_from_kmh.is_finite() || !u_to_kmh.is_finite() || !(u_from_kmh < u_to_kmh) {
        return Err(invalid(format!(
            "need u_from < u_to, got {u_from_kmh} and {u_to_kmh}"
        )));
    }
    if steps < 2 {
        return Err(invalid(format!("need at least 2 steps, got {steps}")));
    }

    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let frac = i as f64 / (steps - 1) as f64;
        let u_kmh = u_from_kmh + (u_to_kmh - u_from_kmh) * frac;
        let omega = forcing_frequency(u_kmh / 3.6, section_length_m)
            .expect("section length validated above");
        let (mag_x, mag_y, singular) = match freq_response::respond(params, omega, amplitude_m) {
            Ok(response) => (
                response.x0.norm() / amplitude_m,
                response.y0.norm() / amplitude_m,
                false,
            ),
            Err(FreqResponseError::ResonantSingularity { .. }) => {
                (f64::INFINITY, f64::INFINITY, true)
            }
        };
        rows.push(SweepRow {
            u_kmh,
            omega_rad_s: omega,
            mag_x,
            mag_y,
            is_peak: false,
            singular,
        });
    }

    let mut peak: Option<(usize, f64)> = None;
    for (i, row) in rows.iter().enumerate() {
        if row.singular {
            continue;
        }
        // Strict comparison: the first occurrence keeps a tie.
        if peak.is_none_or(|(_, best)| row.mag_x > best) {
            peak = Some((i, row.mag_x));
        }
    }
    if let Some((i, _)) = peak {
        rows[i].is_peak = true;
    }

    Ok(SweepTable {
        report: ResonanceReport::compute(params, section_length_m)?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq_response::det_s;
    use approx::assert_relative_eq;

    // ----- exact roots ----------------------------------------------------

    #[test]
    fn exact_roots_default_params() {
        let (f_low, f_high) = undamped_resonance_exact(&VehicleParams::default()).unwrap();
        assert_relative_eq!(f_low, 1.149776022010607, max_relative = 1e-12);
        assert_relative_eq!(f_high, 7.976838908830593, max_relative = 1e-12);
        assert!(f_low < f_high);
    }

    #[test]
    fn exact_roots_satisfy_vieta() {
        let params = VehicleParams::default();
        let (f_low, f_high) = undamped_resonance_exact(&params).unwrap();
        let (w2_low, w2_high) = ((TAU * f_low).powi(2), (TAU * f_high).powi(2));
        let a = params.wagon_mass * params.bogie_mass;
        let sum = (params.wagon_mass * (params.primary_stiffness + params.secondary_stiffness)
            + params.bogie_mass * params.secondary_stiffness)
            / a;
        let product = params.secondary_stiffness * params.primary_stiffness / a;
        assert_relative_eq!(w2_low + w2_high, sum, max_relative = 1e-10);
        assert_relative_eq!(w2_low * w2_high, product, max_relative = 1e-10);
    }

    #[test]
    fn exact_roots_drive_determinant_to_zero() {
        let params = VehicleParams::default().undamped();
        let scale = params.secondary_stiffness * params.primary_stiffness;
        let (f_low, f_high) = undamped_resonance_exact(&params).unwrap();
        assert!(det_s(&params, TAU * f_low).norm() < 1e-8 * scale);
        assert!(det_s(&params, TAU * f_high).norm() < 1e-8 * scale);
    }

    #[test]
    fn exact_roots_ignore_damping_fields() {
        let damped = undamped_resonance_exact(&VehicleParams::default()).unwrap();
        let undamped = undamped_resonance_exact(&VehicleParams::default().undamped()).unwrap();
        assert_eq!(damped, undamped);
    }

    #[test]
    fn weak_secondary_spring_decouples_wagon() {
        // K shrunk 1000x: the low mode approaches a wagon on K alone.
        let mut params = VehicleParams::default();
        params.secondary_stiffness /= 1000.0;
        let (f_low, _) = undamped_resonance_exact(&params).unwrap();
        let single_mass = (params.secondary_stiffness / params.wagon_mass).sqrt() / TAU;
        assert_relative_eq!(f_low, single_mass, max_relative = 0.01);
    }

    // ----- asymptotics ----------------------------------------------------

    #[test]
    fn asymptotic_low_default_value() {
        let f = asymptotic_low(&VehicleParams::default());
        assert_relative_eq!(f, 1.15758848887358, max_relative = 1e-12);
        assert!((f - 1.158).abs() < 0.001);
    }

    #[test]
    fn asymptotic_high_default_value() {
        let f = asymptotic_high(&VehicleParams::default());
        assert_relative_eq!(f, 7.923003897299723, max_relative = 1e-12);
        assert!((f - 7.923).abs() < 0.001);
    }

    #[test]
    fn asymptotic_low_stiff_primary_limit() {
        // N -> inf: series stiffness tends to K, the wagon-on-K frequency.
        let mut params = VehicleParams::default();
        params.primary_stiffness *= 1e6;
        let limit = (params.secondary_stiffness / params.wagon_mass).sqrt() / TAU;
        assert_relative_eq!(asymptotic_low(&params), limit, max_relative = 1e-5);
    }

    #[test]
    fn asymptotic_high_scales_with_stiffness() {
        let base = VehicleParams::default();
        let mut scaled = base;
        scaled.primary_stiffness *= 4.0;
        scaled.secondary_stiffness *= 4.0;
        assert_eq!(asymptotic_high(&scaled), 2.0 * asymptotic_high(&base));
    }

    #[test]
    fn asymptotics_track_exact_roots_within_two_percent() {
        let params = VehicleParams::default();
        let (f_low, f_high) = undamped_resonance_exact(&params).unwrap();
        assert!((asymptotic_low(&params) - f_low).abs() / f_low < 0.02);
        assert!((asymptotic_high(&params) - f_high).abs() / f_high < 0.02);
    }

    #[test]
    fn asymptotic_gap_shrinks_with_mass_ratio() {
        // Synthetic family: bogie mass set to epsilon * M, springs fixed.
        let mut gaps_low = Vec::new();
        let mut gaps_high = Vec::new();
        for epsilon in [0.2, 0.1, 0.05, 0.01] {
            let mut params = VehicleParams::default();
            params.bogie_mass = epsilon * params.wagon_mass;
            let (f_low, f_high) = undamped_resonance_exact(&params).unwrap();
            gaps_low.push((asymptotic_low(&params) - f_low).abs() / f_low);
            gaps_high.push((asymptotic_high(&params) - f_high).abs() / f_high);
        }
        for pair in gaps_low.windows(2) {
            assert!(pair[1] < pair[0], "low gaps not shrinking: {gaps_low:?}");
        }
        for pair in gaps_high.windows(2) {
            assert!(pair[1] < pair[0], "high gaps not shrinking: {gaps_high:?}");
        }
    }

    // ----- critical speed -------------------------------------------------

    #[test]
    fn critical_speed_low_mode() {
        let u = critical_speed(asymptotic_low(&VehicleParams::default()), 25.0);
        assert!((u.kmh - 104.22).abs() < 0.05, "kmh = {}", u.kmh);
        assert!((u.mps - 28.95).abs() < 0.02);
    }

    #[test]
    fn critical_speed_high_mode() {
        let u = critical_speed(asymptotic_high(&VehicleParams::default()), 25.0);
        assert!((u.kmh - 713.07).abs() < 0.1, "kmh = {}", u.kmh);
    }

    #[test]
    fn critical_speed_unit_round_trip_is_exact() {
        for (f, l) in [(1.158, 25.0), (7.923, 25.0), (0.3, 7.7), (11.0, 0.001)] {
            let u = critical_speed(f, l);
            assert_eq!(u.kmh / 3.6, u.mps);
        }
    }

    #[test]
    fn critical_speed_linear_in_length() {
        let u1 = critical_speed(2.0, 0.001);
        assert_relative_eq!(u1.mps, 0.002, max_relative = 1e-12);
        let u25 = critical_speed(1.5, 25.0);
        let u50 = critical_speed(1.5, 50.0);
        assert_eq!(u50.kmh, 2.0 * u25.kmh);
    }

    // ----- report -----------------------------------------------------

    #[test]
    fn report_default_params() {
        let report = ResonanceReport::compute(&VehicleParams::default(), 25.0).unwrap();
        assert!(report.f_exact_low_hz < report.f_exact_high_hz);
        assert!((report.f_asymptotic_low_hz - 1.158).abs() < 0.001);
        assert!((report.f_asymptotic_high_hz - 7.923).abs() < 0.001);
        assert!((report.u_crit_low.kmh - 104.22).abs() < 0.05);
        assert!((report.u_crit_high.kmh - 713.07).abs() < 0.1);
        assert_eq!(report.section_length_m, 25.0);
    }

    #[test]
    fn report_speeds_scale_with_section_length() {
        let params = VehicleParams::default();
        let r25 = ResonanceReport::compute(&params, 25.0).unwrap();
        let r50 = ResonanceReport::compute(&params, 50.0).unwrap();
        assert_eq!(r50.u_crit_low.kmh, 2.0 * r25.u_crit_low.kmh);
        assert_eq!(r50.u_crit_high.kmh, 2.0 * r25.u_crit_high.kmh);
        assert_eq!(r50.f_exact_low_hz, r25.f_exact_low_hz);
    }

    #[test]
    fn report_rejects_bad_length() {
        assert!(ResonanceReport::compute(&VehicleParams::default(), 0.0).is_err());
        assert!(ResonanceReport::compute(&VehicleParams::default(), -2.0).is_err());
    }

    #[test]
    fn report_json_fields() {
        let report = ResonanceReport::compute(&VehicleParams::default(), 25.0).unwrap();
        let value = report.to_json();
        assert!((value["u_crit_low_kmh"].as_f64().unwrap() - 104.183).abs() < 0.001);
        assert!((value["u_crit_high_kmh"].as_f64().unwrap() - 713.07).abs() < 0.001);
        assert!((value["f_exact_low_hz"].as_f64().unwrap() - 1.14978).abs() < 1e-4);
        assert_eq!(value["section_length_m"].as_f64().unwrap(), 25.0);
        assert_relative_eq!(
            value["u_crit_low_mps"].as_f64().unwrap() * 3.6,
            value["u_crit_low_kmh"].as_f64().unwrap(),
            max_relative = 1e-11
        );
    }

    // ----- nondimensional form ---------------------------------------------

    #[test]
    fn nondimensional_default_ratios() {
        let form = nondimensionalize(&VehicleParams::default(), 1.0);
        assert_relative_eq!(form.epsilon, 0.09017857142857143, max_relative = 1e-12);
        assert_relative_eq!(form.lambda, 2.5991692627206646, max_relative = 1e-12);
    }

    #[test]
    fn nondimensional_unit_frequency() {
        let params = VehicleParams::default();
        let omega = (params.secondary_stiffness / params.wagon_mass).sqrt();
        let form = nondimensionalize(&params, omega);
        assert_relative_eq!(form.omega_squared, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn nondimensional_residual_vanishes_at_roots() {
        let params = VehicleParams::default();
        let (f_low, f_high) = undamped_resonance_exact(&params).unwrap();
        for f in [f_low, f_high] {
            let residual = nondimensionalize(&params, TAU * f).characteristic_residual();
            assert!(residual.abs() < 1e-10, "residual = {residual}");
        }
    }

    // ----- speed sweep ---------------------------------------------------

    #[test]
    fn sweep_operating_band_has_interior_peak() {
        let table = speed_sweep(&VehicleParams::default(), 25.0, 0.005, 90.0, 110.0, 201).unwrap();
        assert_eq!(table.rows.len(), 201);
        let (idx, row) = table.peak().expect("peak row");
        assert_eq!(idx, 142);
        assert!(idx > 0 && idx < table.rows.len() - 1, "peak not interior");
        assert_relative_eq!(row.u_kmh, 104.2, max_relative = 1e-12);
        assert_relative_eq!(row.mag_x, 4.866503423081214, max_relative = 1e-9);
        assert_relative_eq!(row.mag_y, 2.4538739160050564, max_relative = 1e-9);
        assert_relative_eq!(table.rows[0].mag_x, 3.2051720585642274, max_relative = 1e-9);
        assert_relative_eq!(
            table.rows[200].mag_x,
            4.352456635911889,
            max_relative = 1e-9
        );
        assert_eq!(table.rows.iter().filter(|r| r.is_peak).count(), 1);
    }

    #[test]
    fn sweep_below_band_is_monotone_with_edge_peak() {
        let table = speed_sweep(&VehicleParams::default(), 25.0, 0.005, 10.0, 20.0, 51).unwrap();
        for pair in table.rows.windows(2) {
            assert!(pair[1].mag_x > pair[0].mag_x);
        }
        let (idx, _) = table.peak().unwrap();
        assert_eq!(idx, table.rows.len() - 1, "peak should sit on the edge");
    }

    #[test]
    fn sweep_two_steps_gives_endpoints() {
        let table = speed_sweep(&VehicleParams::default(), 25.0, 0.005, 90.0, 110.0, 2).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].u_kmh, 90.0);
        assert_eq!(table.rows[1].u_kmh, 110.0);
    }

    #[test]
    fn sweep_csv_golden() {
        let table = speed_sweep(&VehicleParams::default(), 25.0, 0.005, 90.0, 110.0, 2).unwrap();
        assert_eq!(
            table.to_csv(),
            "u_kmh,omega_rad_s,mag_x,mag_y,is_peak\n\
             90,6.28318530718,3.20517205856,1.92463515928,false\n\
             110,7.67944870878,4.35245663591,2.05215821117,true\n"
        );
    }

    #[test]
    fn sweep_flags_singular_rows_without_aborting() {
        // Aim the middle grid point exactly at the undamped low root.
        let params = VehicleParams::default().undamped();
        let (f_low, _) = undamped_resonance_exact(&params).unwrap();
        let u_root = critical_speed(f_low, 25.0).kmh;
        let table = speed_sweep(&params, 25.0, 0.005, u_root - 1.0, u_root + 1.0, 3).unwrap();
        assert!(table.rows[1].singular);
        assert!(table.rows[1].mag_x.is_infinite());
        assert!(!table.rows[1].is_peak);
        assert!(!table.rows[0].singular);
        assert!(!table.rows[2].singular);
        assert_eq!(table.rows.iter().filter(|r| r.is_peak).count(), 1);
        let csv = table.to_csv();
        assert!(csv.contains(",inf,"), "csv: {csv}");
    }

    #[test]
    fn sweep_peak_approaches_root_at_small_damping() {
        let mut params = VehicleParams::default();
        params.secondary_damping *= 0.01;
        let (f_low, _) = undamped_resonance_exact(&params).unwrap();
        let u_root = critical_speed(f_low, 25.0).kmh;
        let table = speed_sweep(&params, 25.0, 0.005, 95.0, 115.0, 2001).unwrap();
        let (_, row) = table.peak().unwrap();
        assert!(
            (row.u_kmh - u_root).abs() / u_root < 0.005,
            "peak at {} vs root speed {u_root}",
            row.u_kmh
        );
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        let params = VehicleParams::default();
        assert!(speed_sweep(&params, 25.0, 0.005, 110.0, 90.0, 10).is_err());
        assert!(speed_sweep(&params, 25.0, 0.005, 90.0, 90.0, 10).is_err());
        assert!(speed_sweep(&params, 25.0, 0.005, 90.0, 110.0, 1).is_err());
        assert!(speed_sweep(&params, 0.0, 0.005, 90.0, 110.0, 10).is_err());
        assert!(speed_sweep(&params, 25.0, 0.0, 90.0, 110.0, 10).is_err());
    }

    #[test]
    fn sweep_json_embeds_report() {
        let table = speed_sweep(&VehicleParams::default(), 25.0, 0.005, 90.0, 110.0, 2).unwrap();
        let value = table.to_json();
        assert!(value["report"]["u_crit_low_kmh"].is_number());
        assert_eq!(value["rows"].as_array().unwrap().len(), 2);
        assert_eq!(value["rows"][1]["is_peak"], Value::Bool(true));
    }
}
