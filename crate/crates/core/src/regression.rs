//! Least-squares regression of crack fraction on operational parameters.
//!
//! Fits the linear model
//!
//! ```text
//! Y = b0 + b1*x1 + b2*x2 + b3*x3 + error
//! ```
//!
//! where `Y` is the observed crack fraction of a route and the predictors are
//! the route distance, the number of stops, and the average speed, each
//! centered by subtracting its column minimum over the fitted table. The
//! coefficients minimize the sum of squared residuals; fit quality is reported
//! as `sum(residual^2) / sum(y^2)`.
//!
//! The solve uses an orthogonal (QR) factorization of the design matrix rather
//! than forming and inverting the normal-equation matrix `X^T X`. Both routes
//! have the same minimizer; the normal-equation route is kept in the test
//! suite as an independent oracle.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::format::report_f64;

/// Number of predictors in the crack model (distance, stops, speed).
pub const NUM_PREDICTORS: usize = 3;

/// CSV text of the bundled NT-11 observation table (15 routes).
pub const NT11_TABLE_CSV: &str = include_str!("../data/table1.csv");

/// One route observation: crack fraction plus the three operational predictors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    /// Fraction of axle-box bogies found cracked, in `[0, 1]`.
    pub crack_fraction: f64,
    /// One-way route distance in km, `> 0`.
    pub distance_km: f64,
    /// Number of stops on the route.
    pub stops: u32,
    /// Average operating speed in km/h, `> 0`.
    pub speed_kmh: f64,
}

impl Observation {
    /// Build an observation, validating ranges.
    pub fn new(
        crack_fraction: f64,
        distance_km: f64,
        stops: u32,
        speed_kmh: f64,
    ) -> Result<Self, RegressionError> {
        if !(0.0..=1.0).contains(&crack_fraction) || !crack_fraction.is_finite() {
            return Err(RegressionError::InvalidObservation {
                field: "crack_fraction",
                value: crack_fraction,
            });
        }
        if !(distance_km > 0.0) || !distance_km.is_finite() {
            return Err(RegressionError::InvalidObservation {
                field: "distance_km",
                value: distance_km,
            });
        }
        if !(speed_kmh > 0.0) || !speed_kmh.is_finite() {
            return Err(RegressionError::InvalidObservation {
                field: "speed_kmh",
                value: speed_kmh,
            });
        }
        Ok(Self {
            crack_fraction,
            distance_km,
            stops,
            speed_kmh,
        })
    }
}

/// An ordered collection of [`Observation`]s.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservationTable {
    rows: Vec<Observation>,
}

impl ObservationTable {
    pub fn new(rows: Vec<Observation>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[Observation] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Parse a table from CSV text with header
    /// `crack_fraction,distance_km,stops,speed_kmh`.
    ///
    /// UTF-8, LF or CRLF. Numbers use decimal points; thousands separators are
    /// rejected (they fail the numeric parse).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, RegressionError> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let headers = csv_reader
            .headers()
            .map_err(|e| RegressionError::Csv {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let expected = ["crack_fraction", "distance_km", "stops", "speed_kmh"];
        let found: Vec<&str> = headers.iter().collect();
        if found != expected {
            return Err(RegressionError::Csv {
                line: 1,
                message: format!("expected header {expected:?}, found {found:?}"),
            });
        }

        let mut rows = Vec::new();
        for record in csv_reader.records() {
            let record = record.map_err(|e| RegressionError::Csv {
                line: e
                    .position()
                    .map(|p| p.line() as usize)
                    .unwrap_or(rows.len() + 2),
                message: e.to_string(),
            })?;
            let line = record
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or(rows.len() + 2);
            if record.len() != 4 {
                return Err(RegressionError::Csv {
                    line,
                    message: format!("expected 4 fields, found {}", record.len()),
                });
            }
            let field = |idx: usize, name: &str| -> Result<f64, RegressionError> {
                record[idx]
                    .parse::<f64>()
                    .map_err(|_| RegressionError::Csv {
                        line,
                        message: format!("invalid {name} value {:?}", &record[idx]),
                    })
            };
            let crack = field(0, "crack_fraction")?;
            let dist = field(1, "distance_km")?;
            let stops: u32 = record[2].parse().map_err(|_| RegressionError::Csv {
                line,
                message: format!("invalid stops value {:?} (nonnegative integer)", &record[2]),
            })?;
            let speed = field(3, "speed_kmh")?;
            let obs =
                Observation::new(crack, dist, stops, speed).map_err(|e| RegressionError::Csv {
                    line,
                    message: e.to_string(),
                })?;
            rows.push(obs);
        }
        Ok(Self { rows })
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self, RegressionError> {
        let file = File::open(path.as_ref()).map_err(|e| RegressionError::Csv {
            line: 0,
            message: format!("{}: {e}", path.as_ref().display()),
        })?;
        Self::from_csv_reader(file)
    }

    /// The bundled NT-11 crack observation table, 15 routes.
    pub fn nt11() -> Self {
        Self::from_csv_reader(NT11_TABLE_CSV.as_bytes()).expect("bundled table parses")
    }
}

/// Column minima used to center the predictors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baselines {
    pub min_distance_km: f64,
    pub min_stops: u32,
    pub min_speed_kmh: f64,
}

/// Result of a least-squares fit.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    /// Coefficients `[b0, b1, b2, b3]`: intercept, per km above the distance
    /// baseline, per stop above the stop baseline, per km/h above the speed
    /// baseline.
    pub beta: [f64; NUM_PREDICTORS + 1],
    /// Column minima the predictors were centered on.
    pub baselines: Baselines,
    /// `y - X*beta`, one entry per table row.
    pub residuals: Vec<f64>,
    /// `sum(residual^2) / sum(y^2)`.
    pub relative_error: f64,
    /// 2-norm condition estimate of `X^T X` (squared condition of `X`).
    pub condition_estimate: f64,
}

/// Crack-fraction estimate from [`predict`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// `b0 + b1*(d - min_d) + b2*(s - min_s) + b3*(v - min_v)`, not clamped to
    /// `[0, 1]`; the linear model is unbounded.
    pub crack_fraction: f64,
    /// True when any predictor lies below its baseline, i.e. the model is
    /// extrapolating outside the fitted ranges.
    pub below_baseline: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegressionError {
    /// The table has no rows.
    EmptyTable,
    /// Fewer rows than model parameters.
    InsufficientRows { rows: usize, needed: usize },
    /// `X^T X` is numerically singular (collinear predictors).
    SingularDesign,
    /// Stopping frequency needs a positive distance.
    ZeroDistance,
    /// An observation field is out of range.
    InvalidObservation { field: &'static str, value: f64 },
    /// CSV parse failure, with 1-based line number.
    Csv { line: usize, message: String },
}

impl fmt::Display for RegressionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegressionError::EmptyTable => write!(f, "observation table is empty"),
            RegressionError::InsufficientRows { rows, needed } => {
                write!(f, "{rows} rows; at least {needed} needed for the fit")
            }
            RegressionError::SingularDesign => {
                write!(
                    f,
                    "design matrix is numerically singular (collinear predictors)"
                )
            }
            RegressionError::ZeroDistance => {
                write!(f, "stopping frequency requires a positive distance")
            }
            RegressionError::InvalidObservation { field, value } => {
                write!(f, "invalid observation: {field} = {value}")
            }
            RegressionError::Csv { line, message } => {
                write!(f, "csv line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for RegressionError {}

/// Build the centered design matrix, the response vector, and the baselines.
///
/// Column 0 is all ones; columns 1-3 are distance, stops, and speed, each with
/// its column minimum subtracted. The response vector holds the crack
/// fractions.
pub fn build_design_matrix(
    table: &ObservationTable,
) -> Result<(DMatrix<f64>, DVector<f64>, Baselines), RegressionError> {
    if table.is_empty() {
        return Err(RegressionError::EmptyTable);
    }
    let rows = table.rows();
    let baselines = Baselines {
        min_distance_km: rows
            .iter()
            .map(|r| r.distance_km)
            .fold(f64::INFINITY, f64::min),
        min_stops: rows.iter().map(|r| r.stops).min().expect("nonempty"),
        min_speed_kmh: rows
            .iter()
            .map(|r| r.speed_kmh)
            .fold(f64::INFINITY, f64::min),
    };

    let n = rows.len();
    let mut design = DMatrix::zeros(n, NUM_PREDICTORS + 1);
    let mut response = DVector::zeros(n);
    for (i, obs) in rows.iter().enumerate() {
        design[(i, 0)] = 1.0;
        design[(i, 1)] = obs.distance_km - baselines.min_distance_km;
        design[(i, 2)] = f64::from(obs.stops) - f64::from(baselines.min_stops);
        design[(i, 3)] = obs.speed_kmh - baselines.min_speed_kmh;
        response[i] = obs.crack_fraction;
    }
    Ok((design, response, baselines))
}

/// Fit the crack model to `table` by least squares.
///
/// The minimizer of `sum((y - X*beta)^2)` is computed from the QR
/// factorization of the centered design matrix.
pub fn fit(table: &ObservationTable) -> Result<RegressionFit, RegressionError> {
    if table.is_empty() {
        return Err(RegressionError::EmptyTable);
    }
    if table.len() < NUM_PREDICTORS + 1 {
        return Err(RegressionError::InsufficientRows {
            rows: table.len(),
            needed: NUM_PREDICTORS + 1,
        });
    }

    let (design, response, baselines) = build_design_matrix(table)?;

    // cond(X^T X) = (s_max / s_min)^2 from the singular values of X.
    let singular_values = design.clone().svd(false, false).singular_values;
    let s_max = singular_values.max();
    let s_min = singular_values.min();
    if s_min <= f64::EPSILON * s_max * table.len() as f64 {
        return Err(RegressionError::SingularDesign);
    }
    let condition_estimate = (s_max / s_min).powi(2);

    let qr = design.clone().qr();
    let q_t_y = qr.q().transpose() * &response;
    let beta_vec = qr
        .r()
        .solve_upper_triangular(&q_t_y)
        .ok_or(RegressionError::SingularDesign)?;

    let residual_vec = &response - &design * &beta_vec;
    let sum_sq_residual: f64 = residual_vec.iter().map(|r| r * r).sum();
    let sum_sq_response: f64 = response.iter().map(|y| y * y).sum();

    let mut beta = [0.0; NUM_PREDICTORS + 1];
    for (slot, value) in beta.iter_mut().zip(beta_vec.iter()) {
        *slot = *value;
    }

    Ok(RegressionFit {
        beta,
        baselines,
        residuals: residual_vec.iter().copied().collect(),
        relative_error: sum_sq_residual / sum_sq_response,
        condition_estimate,
    })
}

/// Evaluate the fitted model at the given raw (uncentered) predictor values.
pub fn predict(fit: &RegressionFit, distance_km: f64, stops: f64, speed_kmh: f64) -> Prediction {
    let d = distance_km - fit.baselines.min_distance_km;
    let s = stops - f64::from(fit.baselines.min_stops);
    let v = speed_kmh - fit.baselines.min_speed_kmh;
    Prediction {
        crack_fraction: fit.beta[0] + fit.beta[1] * d + fit.beta[2] * s + fit.beta[3] * v,
        below_baseline: d < 0.0 || s < 0.0 || v < 0.0,
    }
}

/// Stops per kilometre.
pub fn stopping_frequency(stops: u32, distance_km: f64) -> Result<f64, RegressionError> {
    if !(distance_km > 0.0) {
        return Err(RegressionError::ZeroDistance);
    }
    Ok(f64::from(stops) / distance_km)
}

impl RegressionFit {
    /// Fit report as JSON, with floats at the report precision.
    pub fn to_json(&self) -> Value {
        json!({
            "beta": self.beta.iter().map(|b| report_f64(*b)).collect::<Vec<_>>(),
            "baselines": {
                "min_distance_km": report_f64(self.baselines.min_distance_km),
                "min_stops": self.baselines.min_stops,
                "min_speed_kmh": report_f64(self.baselines.min_speed_kmh),
            },
            "relative_error": report_f64(self.relative_error),
            "condition_estimate": report_f64(self.condition_estimate),
            "residuals": self.residuals.iter().map(|r| report_f64(*r)).collect::<Vec<_>>(),
        })
    }
}
