//! Direct time integration of the wagon-bogie equations of motion.
//!
//! The same two-mass system solved in the frequency domain by
//! [`crate::freq_response`] is integrated here as a first-order system in
//! `(x, x', y, y')` under the rail forcing `z(t) = A cos(omega t)`:
//!
//! ```text
//! M x'' = -K (x - y) - C (x' - y')
//! m y'' =  K (x - y) + C (x' - y') - N (y - z) - D (y' - z')
//! ```
//!
//! Integration is classical fourth-order Runge-Kutta with a fixed step — no
//! adaptivity, so runs are bit-reproducible and convergence studies are a
//! matter of halving `dt`. Steady-state amplitudes are extracted by a
//! single-bin Fourier projection over whole forcing periods,
//! `amp = (2/T) |integral x(t) e^{-i omega t} dt|`, which rejects any DC
//! offset and all integer harmonics exactly on a uniform grid, and is robust
//! against leftover transient in a way that peak-picking is not.
//!
//! The two solvers check each other: the frequency-domain amplitudes must
//! match the extracted ones to within the integration error, and the
//! undamped resonance predicted by [`crate::resonance`] must show up here as
//! secular amplitude growth ([`resonance_growth_probe`]).

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::format::fmt_csv;
use crate::freq_response::VehicleParams;

/// Step size and run length of one simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Fixed integration step, s.
    pub dt: f64,
    /// Total simulated time, s.
    pub t_end: f64,
    /// Forcing periods discarded before measurement.
    pub transient_periods: u32,
    /// Forcing periods measured for amplitude extraction.
    pub measure_periods: u32,
}

impl SimConfig {
    /// Config resolving `steps_per_period` steps within each forcing period
    /// and covering `transient_periods + measure_periods` whole periods.
    pub fn for_forcing(
        omega: f64,
        transient_periods: u32,
        measure_periods: u32,
        steps_per_period: u32,
    ) -> Self {
        let period = TAU / omega;
        Self {
            dt: period / f64::from(steps_per_period),
            t_end: f64::from(transient_periods + measure_periods) * period,
            transient_periods,
            measure_periods,
        }
    }
}

/// Integrated motion on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Sample times, uniform spacing, starting at 0.
    pub times: Vec<f64>,
    /// Wagon displacement x, m.
    pub wagon_pos: Vec<f64>,
    /// Wagon velocity x', m/s.
    pub wagon_vel: Vec<f64>,
    /// Bogie displacement y, m.
    pub bogie_pos: Vec<f64>,
    /// Bogie velocity y', m/s.
    pub bogie_vel: Vec<f64>,
    /// Rail forcing amplitude the run used, m.
    pub forcing_amplitude: f64,
    /// Forcing frequency the run used, rad/s.
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeDomainError {
    /// `dt` resolves fewer than 20 steps per forcing period.
    StepTooLarge { dt: f64, max_dt: f64 },
    /// A state component left the finite range (resonant growth or an
    /// unstable step).
    NonFinite { time: f64 },
    /// Trajectory shorter than the requested transient + measurement window.
    TooShort { needed_s: f64, have_s: f64 },
    /// Growth probe inputs admit no meaningful ratio (zero forcing, damped
    /// system, or too few periods).
    DegenerateProbe { message: String },
    /// Step size or duration not usable.
    InvalidConfig { message: String },
}

impl fmt::Display for TimeDomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeDomainError::StepTooLarge { dt, max_dt } => {
                write!(
                    f,
                    "dt = {dt} exceeds {max_dt} (20 steps per forcing period)"
                )
            }
            TimeDomainError::NonFinite { time } => {
                write!(f, "state became non-finite at t = {time} s")
            }
            TimeDomainError::TooShort { needed_s, have_s } => {
                write!(f, "trajectory covers {have_s} s, need {needed_s} s")
            }
            TimeDomainError::DegenerateProbe { message } => {
                write!(f, "degenerate growth probe: {message}")
            }
            TimeDomainError::InvalidConfig { message } => {
                write!(f, "invalid simulation config: {message}")
            }
        }
    }
}

impl std::error::Error for TimeDomainError {}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Uniform step of the time grid.
    fn dt(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }

    /// Trajectory CSV `t,x,xdot,y,ydot,z`, keeping every `decimation`-th
    /// sample (1 keeps everything); the forcing `z` is recomputed per row.
    pub fn to_csv(&self, decimation: usize) -> String {
        let step = decimation.max(1);
        let mut out = String::from("t,x,xdot,y,ydot,z\n");
        for i in (0..self.times.len()).step_by(step) {
            let z = self.forcing_amplitude * (self.omega * self.times[i]).cos();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_csv(self.times[i]),
                fmt_csv(self.wagon_pos[i]),
                fmt_csv(self.wagon_vel[i]),
                fmt_csv(self.bogie_pos[i]),
                fmt_csv(self.bogie_vel[i]),
                fmt_csv(z),
            ));
        }
        out
    }

    /// Ratio of the peak `|x|` over the final forcing period to the peak
    /// over the first one — the growth diagnostic behind
    /// [`resonance_growth_probe`].
    pub fn first_last_period_peak_ratio(&self, omega: f64) -> Result<f64, TimeDomainError> {
        let dt = self.dt().ok_or(TimeDomainError::TooShort {
            needed_s: f64::INFINITY,
            have_s: 0.0,
        })?;
        if !(omega > 0.0) {
            return Err(TimeDomainError::DegenerateProbe {
                message: format!("no forcing period at omega = {omega}"),
            });
        }
        let samples_per_period = (TAU / omega / dt).round() as usize;
        let have_s = *self.times.last().expect("nonempty");
        if samples_per_period < 1 || self.times.len() < 2 * samples_per_period + 1 {
            return Err(TimeDomainError::TooShort {
                needed_s: 2.0 * TAU / omega,
                have_s,
            });
        }
        let peak = |range: std::ops::Range<usize>| {
            self.wagon_pos[range]
                .iter()
                .fold(0.0f64, |acc, x| acc.max(x.abs()))
        };
        let first = peak(0..samples_per_period + 1);
        let last = peak(self.times.len() - samples_per_period - 1..self.times.len());
        if first == 0.0 {
            return Err(TimeDomainError::DegenerateProbe {
                message: "no motion in the first period".to_string(),
            });
        }
        Ok(last / first)
    }
}

/// Time derivative of the state `[x, x', y, y']` at time `t`.
fn derivatives(
    params: &VehicleParams,
    amplitude: f64,
    omega: f64,
    t: f64,
    state: [f64; 4],
) -> [f64; 4] {
    let [x, xdot, y, ydot] = state;
    let z = amplitude * (omega * t).cos();
    let zdot = -amplitude * omega * (omega * t).sin();
    // Force the secondary suspension exerts on the wagon (and, reversed,
    // on the bogie).
    let secondary = params.secondary_stiffness * (x - y) + params.secondary_damping * (xdot - ydot);
    let primary = params.primary_stiffness * (y - z) + params.primary_damping * (ydot - zdot);
    [
        xdot,
        -secondary / params.wagon_mass,
        ydot,
        (secondary - primary) / params.bogie_mass,
    ]
}

/// Integrate the system under `z = A cos(omega t)` from the given initial
/// state `[x, x', y, y']` over `[0, t_end]`.
///
/// Classical fixed-step RK4. Fails with
/// [`TimeDomainError::StepTooLarge`] when `dt` resolves fewer than 20 steps
/// per forcing period, and with [`TimeDomainError::NonFinite`] as soon as
/// any state component stops being finite — which is how undamped resonant
/// growth surfaces if a run is long enough to overflow.
pub fn simulate(
    params: &VehicleParams,
    amplitude: f64,
    omega: f64,
    cfg: &SimConfig,
    initial: [f64; 4],
) -> Result<Trajectory, TimeDomainError> {
    if !(cfg.dt > 0.0) || !cfg.dt.is_finite() || !(cfg.t_end > 0.0) || !cfg.t_end.is_finite() {
        return Err(TimeDomainError::InvalidConfig {
            message: format!("dt = {}, t_end = {}", cfg.dt, cfg.t_end),
        });
    }
    if omega > 0.0 {
        let max_dt = TAU / omega / 20.0;
        if cfg.dt > max_dt {
            return Err(TimeDomainError::StepTooLarge { dt: cfg.dt, max_dt });
        }
    }
    if !initial.iter().all(|v| v.is_finite()) {
        return Err(TimeDomainError::NonFinite { time: 0.0 });
    }

    // Small slack so t_end/dt landing a hair above an integer (fp noise)
    // does not add a step.
    let steps = ((cfg.t_end / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let mut trajectory = Trajectory {
        times: Vec::with_capacity(steps + 1),
        wagon_pos: Vec::with_capacity(steps + 1),
        wagon_vel: Vec::with_capacity(steps + 1),
        bogie_pos: Vec::with_capacity(steps + 1),
        bogie_vel: Vec::with_capacity(steps + 1),
        forcing_amplitude: amplitude,
        omega,
    };
    let mut push = |t: f64, state: [f64; 4]| {
        trajectory.times.push(t);
        trajectory.wagon_pos.push(state[0]);
        trajectory.wagon_vel.push(state[1]);
        trajectory.bogie_pos.push(state[2]);
        trajectory.bogie_vel.push(state[3]);
    };

    let mut state = initial;
    push(0.0, state);
    for i in 0..steps {
        let t = i as f64 * cfg.dt;
        let h = cfg.dt;
        let k1 = derivatives(params, amplitude, omega, t, state);
        let k2 = derivatives(
            params,
            amplitude,
            omega,
            t + h / 2.0,
            advance(state, k1, h / 2.0),
        );
        let k3 = derivatives(
            params,
            amplitude,
            omega,
            t + h / 2.0,
            advance(state, k2, h / 2.0),
        );
        let k4 = derivatives(params, amplitude, omega, t + h, advance(state, k3, h));
        for j in 0..4 {
            state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_next = (i + 1) as f64 * cfg.dt;
        if !state.iter().all(|v| v.is_finite()) {
            return Err(TimeDomainError::NonFinite { time: t_next });
        }
        push(t_next, state);
    }
    Ok(trajectory)
}

fn advance(state: [f64; 4], slope: [f64; 4], h: f64) -> [f64; 4] {
    [
        state[0] + h * slope[0],
        state[1] + h * slope[1],
        state[2] + h * slope[2],
        state[3] + h * slope[3],
    ]
}

/// Complex Fourier components of wagon and bogie motion at the forcing
/// frequency, taken over the final `cfg.measure_periods` whole periods.
///
/// For a settled response `x(t) = Re{x0 e^{i omega t}}` the returned
/// component converges to the complex amplitude `x0`, so both magnitude and
/// phase are directly comparable with the frequency-domain solution.
pub fn steady_state_components(
    trajectory: &Trajectory,
    omega: f64,
    cfg: &SimConfig,
) -> Result<(Complex64, Complex64), TimeDomainError> {
    let have_s = trajectory.times.last().copied().unwrap_or(0.0);
    if !(omega > 0.0) {
        return Err(TimeDomainError::TooShort {
            needed_s: f64::INFINITY,
            have_s,
        });
    }
    let period = TAU / omega;
    let needed_s = f64::from(cfg.transient_periods + cfg.measure_periods) * period;
    if have_s < needed_s * (1.0 - 1e-9) {
        return Err(TimeDomainError::TooShort { needed_s, have_s });
    }
    let dt = trajectory
        .dt()
        .ok_or(TimeDomainError::TooShort { needed_s, have_s })?;
    let window = (f64::from(cfg.measure_periods) * period / dt).round() as usize;
    if window < 2 || window + 1 > trajectory.times.len() {
        return Err(TimeDomainError::TooShort { needed_s, have_s });
    }

    let start = trajectory.times.len() - window - 1;
    let mut sum_x = Complex64::new(0.0, 0.0);
    let mut sum_y = Complex64::new(0.0, 0.0);
    for i in start..trajectory.times.len() {
        // Trapezoid weights: half at the window ends.
        let weight = if i == start || i == trajectory.times.len() - 1 {
            0.5
        } else {
            1.0
        };
        let phase = Complex64::from_polar(1.0, -omega * trajectory.times[i]);
        sum_x += weight * trajectory.wagon_pos[i] * phase;
        sum_y += weight * trajectory.bogie_pos[i] * phase;
    }
    let scale = 2.0 * dt / (window as f64 * dt);
    Ok((scale * sum_x, scale * sum_y))
}

/// Steady-state amplitudes `(|x|, |y|)` over the final measurement window.
pub fn steady_state_amplitude(
    trajectory: &Trajectory,
    omega: f64,
    cfg: &SimConfig,
) -> Result<(f64, f64), TimeDomainError> {
    let (cx, cy) = steady_state_components(trajectory, omega, cfg)?;
    Ok((cx.norm(), cy.norm()))
}

/// Drive the undamped system at a resonance root from rest and report the
/// growth of the wagon peak between the first and the last forcing period.
///
/// At an exact root the response grows secularly (linearly in time), so the
/// ratio scales with `periods`; off resonance the response stays beat-bounded.
/// The probe resolves 200 steps per period.
pub fn resonance_growth_probe(
    params: &VehicleParams,
    amplitude: f64,
    omega_root: f64,
    periods: u32,
) -> Result<f64, TimeDomainError> {
    if params.secondary_damping != 0.0 || params.primary_damping != 0.0 {
        return Err(TimeDomainError::DegenerateProbe {
            message: "growth probe expects an undamped system".to_string(),
        });
    }
    if !(amplitude > 0.0) {
        return Err(TimeDomainError::DegenerateProbe {
            message: format!("no forcing: amplitude = {amplitude}"),
        });
    }
    if periods < 2 {
        return Err(TimeDomainError::DegenerateProbe {
            message: format!("need at least 2 periods, got {periods}"),
        });
    }
    let cfg = SimConfig::for_forcing(omega_root, periods - 1, 1, 200);
    let trajectory = simulate(params, amplitude, omega_root, &cfg, [0.0; 4])?;
    trajectory.first_last_period_peak_ratio(omega_root)
}
