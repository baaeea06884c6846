//! Motion of a train point over a periodic rail profile.
//!
//! A rail segment of section length `L` and amplitude `A` has height
//! `y = A*h(x/L)` for a dimensionless shape function `h`. A train crossing it
//! at horizontal speed `u` sees
//!
//! ```text
//! position:     (u*t, A*h(u*t/L))
//! acceleration:  A*(u/L)^2 * h''(u*t/L)
//! ```
//!
//! so the vertical forcing scales with `u^2/L^2`, and a sinusoidal shape
//! excites the suspension at `omega = 2*pi*u/L`. The wagon, riding height `H`
//! above wheels spaced `B` apart, is additionally tilted by the height
//! difference between the wheels; its lateral offset `w = H*tan(alpha)`
//! inherits the same `u^2` scaling reduced by `H/B`.

use std::f64::consts::TAU;
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

/// Dimensionless shape of one rail section.
#[derive(Debug, Clone)]
enum Shape {
    /// `h(s) = cos(2*pi*s)`, one full period over the section.
    Cosine,
    /// Samples `(s, h)` on `[0, 1]`, interpolated by a natural cubic spline.
    Tabulated(CubicSpline),
}

/// Vertical profile of one repeating rail section.
#[derive(Debug, Clone)]
pub struct RailProfile {
    /// Peak vertical variation in metres, `>= 0`.
    pub amplitude_m: f64,
    /// Longitudinal period of the profile in metres, `> 0`.
    pub section_length_m: f64,
    shape: Shape,
}

/// Wheel spacing and wagon height of the simplified bogie geometry.
#[derive(Debug, Clone, Copy)]
pub struct GeometryParams {
    /// Distance between the two wheels in metres, `> 0`.
    pub wheel_base_m: f64,
    /// Height of the wagon reference point above the wheels in metres, `> 0`.
    pub wagon_height_m: f64,
}

impl GeometryParams {
    pub fn new(wheel_base_m: f64, wagon_height_m: f64) -> Result<Self, KinematicsError> {
        if !(wheel_base_m > 0.0) || !wheel_base_m.is_finite() {
            return Err(KinematicsError::InvalidGeometry {
                field: "wheel_base_m",
                value: wheel_base_m,
            });
        }
        if !(wagon_height_m > 0.0) || !wagon_height_m.is_finite() {
            return Err(KinematicsError::InvalidGeometry {
                field: "wagon_height_m",
                value: wagon_height_m,
            });
        }
        Ok(Self {
            wheel_base_m,
            wagon_height_m,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KinematicsError {
    /// Non-positive or non-finite section length.
    ZeroSectionLength,
    /// Negative or non-finite amplitude.
    InvalidAmplitude(f64),
    /// Geometry field out of range.
    InvalidGeometry { field: &'static str, value: f64 },
    /// Tabulated shape cannot supply a second derivative (needs >= 4 samples).
    NonDifferentiableShape { samples: usize },
    /// Tabulated shape table is unusable.
    InvalidTable(String),
}

impl fmt::Display for KinematicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KinematicsError::ZeroSectionLength => {
                write!(f, "section length must be positive")
            }
            KinematicsError::InvalidAmplitude(a) => {
                write!(f, "amplitude must be finite and nonnegative, got {a}")
            }
            KinematicsError::InvalidGeometry { field, value } => {
                write!(f, "invalid geometry: {field} = {value}")
            }
            KinematicsError::NonDifferentiableShape { samples } => {
                write!(
                    f,
                    "tabulated shape with {samples} samples has no usable second derivative (need >= 4)"
                )
            }
            KinematicsError::InvalidTable(msg) => write!(f, "profile table: {msg}"),
        }
    }
}

impl std::error::Error for KinematicsError {}

impl RailProfile {
    /// Cosine profile, `h(s) = cos(2*pi*s)`.
    pub fn cosine(amplitude_m: f64, section_length_m: f64) -> Result<Self, KinematicsError> {
        Self::validate_dimensions(amplitude_m, section_length_m)?;
        Ok(Self {
            amplitude_m,
            section_length_m,
            shape: Shape::Cosine,
        })
    }

    /// Tabulated profile from `(s, h)` samples with strictly increasing
    /// `s` in `[0, 1]`. At least two samples; the shape is treated as
    /// periodic in `s` with period 1.
    pub fn tabulated(
        amplitude_m: f64,
        section_length_m: f64,
        samples: &[(f64, f64)],
    ) -> Result<Self, KinematicsError> {
        Self::validate_dimensions(amplitude_m, section_length_m)?;
        let spline = CubicSpline::new(samples)?;
        Ok(Self {
            amplitude_m,
            section_length_m,
            shape: Shape::Tabulated(spline),
        })
    }

    /// Read a tabulated shape from CSV with header `s,h`.
    pub fn from_table_csv<P: AsRef<Path>>(
        amplitude_m: f64,
        section_length_m: f64,
        path: P,
    ) -> Result<Self, KinematicsError> {
        let mut text = String::new();
        File::open(path.as_ref())
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| {
                KinematicsError::InvalidTable(format!("{}: {e}", path.as_ref().display()))
            })?;
        Self::from_table_csv_str(amplitude_m, section_length_m, &text)
    }

    pub fn from_table_csv_str(
        amplitude_m: f64,
        section_length_m: f64,
        text: &str,
    ) -> Result<Self, KinematicsError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim().trim_end_matches('\r') == "s,h" => {}
            _ => {
                return Err(KinematicsError::InvalidTable(
                    "expected header \"s,h\"".to_string(),
                ))
            }
        }
        let mut samples = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (s, h) = line.split_once(',').ok_or_else(|| {
                KinematicsError::InvalidTable(format!("line {}: expected \"s,h\"", idx + 1))
            })?;
            let parse = |txt: &str, name: &str| {
                txt.trim().parse::<f64>().map_err(|_| {
                    KinematicsError::InvalidTable(format!(
                        "line {}: invalid {name} value {txt:?}",
                        idx + 1
                    ))
                })
            };
            samples.push((parse(s, "s")?, parse(h, "h")?));
        }
        Self::tabulated(amplitude_m, section_length_m, &samples)
    }

    fn validate_dimensions(amplitude_m: f64, section_length_m: f64) -> Result<(), KinematicsError> {
        if !(section_length_m > 0.0) || !section_length_m.is_finite() {
            return Err(KinematicsError::ZeroSectionLength);
        }
        if amplitude_m < 0.0 || !amplitude_m.is_finite() {
            return Err(KinematicsError::InvalidAmplitude(amplitude_m));
        }
        Ok(())
    }

    /// Shape value `h(s)`; `s` is wrapped into one period.
    pub fn shape_value(&self, s: f64) -> f64 {
        match &self.shape {
            Shape::Cosine => (TAU * s).cos(),
            Shape::Tabulated(spline) => spline.value(wrap_unit(s)),
        }
    }

    /// Shape second derivative `h''(s)` with respect to the dimensionless
    /// argument.
    pub fn shape_second_derivative(&self, s: f64) -> Result<f64, KinematicsError> {
        match &self.shape {
            Shape::Cosine => Ok(-(TAU * TAU) * (TAU * s).cos()),
            Shape::Tabulated(spline) => {
                if spline.len() < 4 {
                    return Err(KinematicsError::NonDifferentiableShape {
                        samples: spline.len(),
                    });
                }
                Ok(spline.second_derivative(wrap_unit(s)))
            }
        }
    }
}

fn wrap_unit(s: f64) -> f64 {
    let r = s.rem_euclid(1.0);
    if r.is_nan() {
        0.0
    } else {
        r
    }
}

/// Position `(x, y)` of a point riding the profile at speed `u` and time `t`.
pub fn position(profile: &RailProfile, speed_mps: f64, time_s: f64) -> (f64, f64) {
    let x = speed_mps * time_s;
    let y = profile.amplitude_m * profile.shape_value(x / profile.section_length_m);
    (x, y)
}

/// Vertical acceleration `A*(u/L)^2 * h''(u*t/L)` of the riding point.
pub fn vertical_acceleration(
    profile: &RailProfile,
    speed_mps: f64,
    time_s: f64,
) -> Result<f64, KinematicsError> {
    let s = speed_mps * time_s / profile.section_length_m;
    let rate = speed_mps / profile.section_length_m;
    Ok(profile.amplitude_m * rate * rate * profile.shape_second_derivative(s)?)
}

/// Wagon offset `w = H*(y2 - y1)/B` from the height difference between the
/// two wheels, one wheel base apart along the track.
pub fn wagon_offset(
    geometry: &GeometryParams,
    profile: &RailProfile,
    speed_mps: f64,
    time_s: f64,
) -> f64 {
    let x = speed_mps * time_s;
    let l = profile.section_length_m;
    let y1 = profile.amplitude_m * profile.shape_value(x / l);
    let y2 = profile.amplitude_m * profile.shape_value((x + geometry.wheel_base_m) / l);
    geometry.wagon_height_m * (y2 - y1) / geometry.wheel_base_m
}

/// Order-of-magnitude envelopes of the vertical and offset accelerations:
/// `A*u^2/L^2` and `H*A*u^2/(B*L^2)`.
pub fn acceleration_scale(
    profile: &RailProfile,
    geometry: &GeometryParams,
    speed_mps: f64,
) -> (f64, f64) {
    let vertical = profile.amplitude_m * speed_mps * speed_mps
        / (profile.section_length_m * profile.section_length_m);
    let offset = geometry.wagon_height_m * vertical / geometry.wheel_base_m;
    (vertical, offset)
}

/// Forcing frequency `omega = 2*pi*u/L` in rad/s seen by a train at speed `u`
/// on sections of length `L`.
pub fn forcing_frequency(speed_mps: f64, section_length_m: f64) -> Result<f64, KinematicsError> {
    if !(section_length_m > 0.0) {
        return Err(KinematicsError::ZeroSectionLength);
    }
    Ok(TAU * speed_mps / section_length_m)
}

/// Natural cubic spline through strictly increasing knots.
#[derive(Debug, Clone)]
struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots (zero at the ends).
    y2: Vec<f64>,
}

impl CubicSpline {
    fn new(samples: &[(f64, f64)]) -> Result<Self, KinematicsError> {
        if samples.len() < 2 {
            return Err(KinematicsError::InvalidTable(format!(
                "{} samples; need at least 2",
                samples.len()
            )));
        }
        for pair in samples.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(KinematicsError::InvalidTable(
                    "s values must be strictly increasing".to_string(),
                ));
            }
        }
        if samples[0].0 < 0.0 || samples[samples.len() - 1].0 > 1.0 {
            return Err(KinematicsError::InvalidTable(
                "s values must lie in [0, 1]".to_string(),
            ));
        }
        let xs: Vec<f64> = samples.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = samples.iter().map(|p| p.1).collect();
        let y2 = natural_spline_second_derivatives(&xs, &ys);
        Ok(Self { xs, ys, y2 })
    }

    fn len(&self) -> usize {
        self.xs.len()
    }

    fn segment(&self, x: f64) -> usize {
        // Clamp outside the knot range onto the boundary segment.
        match self
            .xs
            .binary_search_by(|probe| probe.partial_cmp(&x).expect("finite knots"))
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.xs.len() - 2),
        }
    }

    fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[i + 1]) * h * h / 6.0
    }

    fn second_derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.y2[i] + b * self.y2[i + 1]
    }
}

/// Second derivatives of the natural cubic spline (tridiagonal solve).
fn natural_spline_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut y2 = vec![0.0; n];
    if n < 3 {
        return y2; // linear interpolation: zero curvature
    }
    let mut scratch = vec![0.0; n - 1];
    for i in 1..n - 1 {
        let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        let p = sig * y2[i - 1] + 2.0;
        y2[i] = (sig - 1.0) / p;
        let slope_right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        let slope_left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        scratch[i] =
            (6.0 * (slope_right - slope_left) / (xs[i + 1] - xs[i - 1]) - sig * scratch[i - 1]) / p;
    }
    y2[n - 1] = 0.0;
    for i in (1..n - 1).rev() {
        y2[i] = y2[i] * y2[i + 1] + scratch[i];
    }
    y2[0] = 0.0;
    y2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cosine_profile() -> RailProfile {
        RailProfile::cosine(0.01, 25.0).unwrap()
    }

    #[test]
    fn position_flat_rail_is_flat() {
        let profile = RailProfile::cosine(0.0, 25.0).unwrap();
        for t in [0.0, 0.3, 1.7, 9.9] {
            assert_eq!(position(&profile, 30.0, t).1, 0.0);
        }
    }

    #[test]
    fn position_cosine_starts_at_amplitude() {
        let (x, y) = position(&cosine_profile(), 40.0, 0.0);
        assert_eq!(x, 0.0);
        assert_eq!(y, 0.01);
    }

    #[test]
    fn position_half_section_is_negative_amplitude() {
        // u*t = 12.5 m, half of L = 25 m: h = cos(pi) = -1.
        let (x, y) = position(&cosine_profile(), 25.0, 0.5);
        assert_relative_eq!(x, 12.5, max_relative = 1e-15);
        assert_relative_eq!(y, -0.01, max_relative = 1e-12);
    }

    #[test]
    fn vertical_acceleration_closed_form() {
        let a = vertical_acceleration(&cosine_profile(), 28.95, 0.0).unwrap();
        assert_relative_eq!(a, -0.529391367844096, max_relative = 1e-12);
    }

    #[test]
    fn vertical_acceleration_zero_amplitude() {
        let profile = RailProfile::cosine(0.0, 25.0).unwrap();
        assert_eq!(vertical_acceleration(&profile, 28.95, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn vertical_acceleration_quadruples_with_doubled_speed() {
        // Same track position: t halves when u doubles.
        let profile = cosine_profile();
        let a1 = vertical_acceleration(&profile, 10.0, 0.8).unwrap();
        let a2 = vertical_acceleration(&profile, 20.0, 0.4).unwrap();
        assert_eq!(a2, 4.0 * a1);
    }

    #[test]
    fn vertical_acceleration_matches_finite_differences() {
        let profile = cosine_profile();
        let u = 28.95;
        let dt = 1e-4;
        for t in [0.0, 0.13, 0.37, 0.81, 1.29] {
            let y = |time: f64| position(&profile, u, time).1;
            let fd = (y(t + dt) - 2.0 * y(t) + y(t - dt)) / (dt * dt);
            let analytic = vertical_acceleration(&profile, u, t).unwrap();
            if analytic.abs() > 1e-3 {
                assert_relative_eq!(fd, analytic, max_relative = 1e-4);
            } else {
                assert!((fd - analytic).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn wagon_offset_examples() {
        let geometry = GeometryParams::new(2.5, 1.0).unwrap();
        let profile = cosine_profile();
        // u*t = 0: y1 = A, y2 = A*cos(2*pi*0.1).
        let w = wagon_offset(&geometry, &profile, 0.0, 0.0);
        assert_relative_eq!(w, -0.00076393202250021, max_relative = 1e-12);

        let flat = RailProfile::cosine(0.0, 25.0).unwrap();
        assert_eq!(wagon_offset(&geometry, &flat, 30.0, 1.0), 0.0);

        // Wheel base equal to the section length: both wheels at the same height.
        let geometry_full = GeometryParams::new(25.0, 1.0).unwrap();
        let w = wagon_offset(&geometry_full, &profile, 10.0, 0.33);
        assert!(w.abs() < 1e-15);
    }

    #[test]
    fn wagon_offset_is_odd_under_profile_negation() {
        // Amplitude is nonnegative by construction, so profile negation acts
        // through the shape samples; the spline is linear in them, making
        // the negated profile's offset the exact mirror.
        let geometry = GeometryParams::new(2.5, 1.0).unwrap();
        let samples: Vec<(f64, f64)> = (0..=16)
            .map(|i| {
                let s = f64::from(i) / 16.0;
                (s, (TAU * s).cos())
            })
            .collect();
        let negated: Vec<(f64, f64)> = samples.iter().map(|&(s, h)| (s, -h)).collect();
        let plus = RailProfile::tabulated(0.01, 25.0, &samples).unwrap();
        let minus = RailProfile::tabulated(0.01, 25.0, &negated).unwrap();
        for (u, t) in [(10.0, 0.2), (25.0, 0.31), (40.0, 0.05)] {
            let w_plus = wagon_offset(&geometry, &plus, u, t);
            let w_minus = wagon_offset(&geometry, &minus, u, t);
            assert_relative_eq!(w_minus, -w_plus, max_relative = 1e-12);
        }
    }

    #[test]
    fn wagon_offset_is_linear_in_amplitude() {
        let geometry = GeometryParams::new(2.5, 1.0).unwrap();
        let single = RailProfile::cosine(0.01, 25.0).unwrap();
        let double = RailProfile::cosine(0.02, 25.0).unwrap();
        for (u, t) in [(10.0, 0.2), (25.0, 0.31), (40.0, 0.05)] {
            assert_relative_eq!(
                wagon_offset(&geometry, &double, u, t),
                2.0 * wagon_offset(&geometry, &single, u, t),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn acceleration_scale_examples() {
        let geometry = GeometryParams::new(2.5, 1.0).unwrap();
        let profile = cosine_profile();
        let (vertical, offset) = acceleration_scale(&profile, &geometry, 28.95);
        assert_relative_eq!(vertical, 0.01340964, max_relative = 1e-6);
        assert_relative_eq!(offset, 0.005363856, max_relative = 1e-6);

        assert_eq!(acceleration_scale(&profile, &geometry, 0.0), (0.0, 0.0));

        let (v1, o1) = acceleration_scale(&profile, &geometry, 10.0);
        let (v2, o2) = acceleration_scale(&profile, &geometry, 20.0);
        assert_eq!(v2, 4.0 * v1);
        assert_eq!(o2, 4.0 * o1);
    }

    #[test]
    fn forcing_frequency_examples() {
        let omega = forcing_frequency(28.95, 25.0).unwrap();
        assert_relative_eq!(omega, 7.27592858571396, max_relative = 1e-12);
        assert_relative_eq!(omega / TAU, 1.158, max_relative = 1e-12);

        assert_eq!(forcing_frequency(0.0, 25.0).unwrap(), 0.0);
        assert_relative_eq!(
            forcing_frequency(198.075, 25.0).unwrap() / TAU,
            7.923,
            max_relative = 1e-12
        );
        assert_eq!(
            forcing_frequency(10.0, 0.0).unwrap_err(),
            KinematicsError::ZeroSectionLength
        );
    }

    #[test]
    fn forcing_frequency_scaling() {
        let base = forcing_frequency(10.0, 25.0).unwrap();
        assert_relative_eq!(forcing_frequency(20.0, 25.0).unwrap(), 2.0 * base);
        assert_relative_eq!(forcing_frequency(10.0, 50.0).unwrap(), base / 2.0);
    }

    #[test]
    fn tabulated_profile_tracks_cosine() {
        let samples: Vec<(f64, f64)> = (0..=64)
            .map(|i| {
                let s = f64::from(i) / 64.0;
                (s, (TAU * s).cos())
            })
            .collect();
        let tabulated = RailProfile::tabulated(0.01, 25.0, &samples).unwrap();
        let exact = cosine_profile();
        for t in [0.0, 0.11, 0.42, 0.73] {
            let (_, y_tab) = position(&tabulated, 20.0, t);
            let (_, y_cos) = position(&exact, 20.0, t);
            assert!((y_tab - y_cos).abs() < 1e-5, "t = {t}: {y_tab} vs {y_cos}");
        }
        // Second derivatives only away from the table ends: the natural end
        // condition pins the spline curvature to zero at s = 0 and s = 1,
        // which a cosine does not satisfy.
        let scale = (TAU * TAU) * 0.01 * (20.0f64 / 25.0).powi(2);
        for t in [0.11, 0.42, 0.73] {
            let a_tab = vertical_acceleration(&tabulated, 20.0, t).unwrap();
            let a_cos = vertical_acceleration(&exact, 20.0, t).unwrap();
            assert!(
                (a_tab - a_cos).abs() < 0.05 * scale,
                "t = {t}: {a_tab} vs {a_cos}"
            );
        }
    }

    #[test]
    fn tabulated_profile_wraps_periodically() {
        let samples: Vec<(f64, f64)> = (0..=8)
            .map(|i| {
                let s = f64::from(i) / 8.0;
                (s, (PI * s).sin())
            })
            .collect();
        let profile = RailProfile::tabulated(0.02, 10.0, &samples).unwrap();
        assert_relative_eq!(
            profile.shape_value(0.25),
            profile.shape_value(3.25),
            max_relative = 1e-12
        );
    }

    #[test]
    fn tabulated_too_few_samples_for_derivative() {
        let profile =
            RailProfile::tabulated(0.01, 25.0, &[(0.0, 1.0), (0.5, -1.0), (1.0, 1.0)]).unwrap();
        // Interpolation still works with 3 samples...
        let (_, y) = position(&profile, 10.0, 0.0);
        assert_relative_eq!(y, 0.01, max_relative = 1e-12);
        // ...but the derivative path requires 4.
        assert_eq!(
            vertical_acceleration(&profile, 10.0, 0.0).unwrap_err(),
            KinematicsError::NonDifferentiableShape { samples: 3 }
        );
    }

    #[test]
    fn tabulated_rejects_bad_tables() {
        assert!(RailProfile::tabulated(0.01, 25.0, &[(0.0, 1.0)]).is_err());
        assert!(RailProfile::tabulated(0.01, 25.0, &[(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(RailProfile::tabulated(0.01, 25.0, &[(0.5, 1.0), (0.2, 2.0)]).is_err());
        assert!(RailProfile::tabulated(0.01, 25.0, &[(-0.1, 1.0), (0.5, 2.0)]).is_err());
        assert!(RailProfile::tabulated(0.01, 25.0, &[(0.5, 1.0), (1.2, 2.0)]).is_err());
    }

    #[test]
    fn table_csv_parsing() {
        let text = "s,h\n0,1\n0.25,0\n0.5,-1\n0.75,0\n1,1\n";
        let profile = RailProfile::from_table_csv_str(0.01, 25.0, text).unwrap();
        assert_relative_eq!(profile.shape_value(0.5), -1.0, max_relative = 1e-12);

        assert!(RailProfile::from_table_csv_str(0.01, 25.0, "x,y\n0,1\n").is_err());
        assert!(RailProfile::from_table_csv_str(0.01, 25.0, "s,h\n0,abc\n").is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(RailProfile::cosine(-0.01, 25.0).is_err());
        assert!(RailProfile::cosine(0.01, 0.0).is_err());
        assert!(GeometryParams::new(0.0, 1.0).is_err());
        assert!(GeometryParams::new(2.5, -1.0).is_err());
    }
}
