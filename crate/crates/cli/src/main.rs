//! `raildyn` — reproducible runs of the crack-statistics regression and the
//! wagon–bogie resonance analyses.
//!
//! Every command prints a short human summary to stdout and emits a machine
//! payload (JSON or CSV, fixed 12-significant-digit formatting). With
//! `--out FILE` the payload goes to the file and a `FILE.manifest.json`
//! records the run; without it the payload follows the summary on stdout.
//!
//! Exit codes: 0 success; 2 bad input (CLI usage, CSV/config parse, invalid
//! ranges); 3 degenerate problem (singular design, too few rows, resonant
//! singularity); 4 undamped resonance growth.

// Validation deliberately uses `!(x > 0.0)` rather than `x <= 0.0`: the
// negated form also sends NaN down the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use raildyn::format::{fmt_csv, report_f64};
use raildyn::freq_response::{respond, FreqResponseError, ParamsError};
use raildyn::kinematics::{acceleration_scale, forcing_frequency, GeometryParams, RailProfile};
use raildyn::regression::{fit, stopping_frequency, ObservationTable, RegressionError};
use raildyn::resonance::{speed_sweep, ResonanceError, ResonanceReport};
use raildyn::timedomain::{simulate, steady_state_amplitude, TimeDomainError};
use raildyn::{SimConfig, VehicleParams};

/// Conversion constant between m/s and km/h.
const KMH_PER_MPS: f64 = 3.6;

#[derive(Parser)]
#[command(
    name = "raildyn",
    version,
    about = "Axle-box crack statistics and wagon-bogie resonance analysis"
)]
struct Cli {
    /// Vehicle parameter file (`key = value`; see README). Defaults to the
    /// NT-11 values when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,

    /// Write the payload here instead of stdout; also writes
    /// `<FILE>.manifest.json` describing the run.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Payload format. Each command has a natural default (JSON for reports,
    /// CSV for tables); unsupported combinations are rejected.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit the crack-fraction regression on a route table.
    Regress {
        /// CSV table `crack_fraction,distance_km,stops,speed_kmh`; omitted,
        /// the bundled NT-11 table is used.
        csv: Option<PathBuf>,
    },

    /// Report natural frequencies and the critical speeds they imply.
    Resonance {
        /// Repeating rail section length L in metres.
        #[arg(long, default_value_t = 25.0)]
        section_length: f64,
    },

    /// Tabulate steady-state transfer magnitudes over a train-speed range.
    Sweep {
        /// Repeating rail section length L in metres.
        #[arg(long, default_value_t = 25.0)]
        section_length: f64,
        /// Rail profile amplitude A in metres.
        #[arg(long, default_value_t = 0.005)]
        amplitude: f64,
        /// Lower end of the speed range, km/h.
        #[arg(long, default_value_t = 90.0)]
        from_kmh: f64,
        /// Upper end of the speed range, km/h.
        #[arg(long, default_value_t = 110.0)]
        to_kmh: f64,
        /// Number of grid points (both ends included).
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },

    /// Integrate the two-mass model and compare against the frequency domain.
    Simulate {
        /// Rail profile amplitude A in metres (0 allowed: free decay).
        #[arg(long, default_value_t = 0.005)]
        amplitude: f64,
        /// Forcing frequency in rad/s.
        #[arg(long)]
        omega: f64,
        /// Forcing periods discarded before measurement.
        #[arg(long, default_value_t = 20)]
        transient_periods: u32,
        /// Forcing periods measured for amplitude extraction.
        #[arg(long, default_value_t = 5)]
        measure_periods: u32,
        /// Integration steps per forcing period (at least 20).
        #[arg(long, default_value_t = 200)]
        steps_per_period: u32,
        /// Keep every n-th trajectory sample in the CSV dump.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        decimate: u32,
    },

    /// Acceleration envelopes and forcing frequency for a profile and speed.
    AccelScale {
        /// Rail profile amplitude A in metres.
        #[arg(long, default_value_t = 0.005)]
        amplitude: f64,
        /// Repeating rail section length L in metres.
        #[arg(long, default_value_t = 25.0)]
        section_length: f64,
        /// Train speed in km/h.
        #[arg(long)]
        speed_kmh: f64,
        /// Wheel base B in metres.
        #[arg(long, default_value_t = 2.5)]
        wheel_base: f64,
        /// Wagon reference height H in metres.
        #[arg(long, default_value_t = 1.0)]
        wagon_height: f64,
    },
}

/// A failed run: message for stderr plus the process exit code.
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type RunResult = Result<(), Failure>;

fn main() {
    let cli = Cli::parse();
    if let Err(failure) = run(&cli) {
        eprintln!("error: {}", failure.message);
        process::exit(failure.code);
    }
}

/// Write to stdout, treating a vanished consumer (`| head`, closed pipe) as a
/// normal end of the run rather than a panic.
fn stdout_write(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        process::exit(2);
    }
}

/// One summary line to stdout.
fn say(line: String) {
    stdout_write(&(line + "\n"));
}

fn run(cli: &Cli) -> RunResult {
    match &cli.command {
        Command::Regress { csv } => cmd_regress(cli, csv.as_deref()),
        Command::Resonance { section_length } => cmd_resonance(cli, *section_length),
        Command::Sweep {
            section_length,
            amplitude,
            from_kmh,
            to_kmh,
            steps,
        } => cmd_sweep(cli, *section_length, *amplitude, *from_kmh, *to_kmh, *steps),
        Command::Simulate {
            amplitude,
            omega,
            transient_periods,
            measure_periods,
            steps_per_period,
            decimate,
        } => cmd_simulate(
            cli,
            *amplitude,
            *omega,
            *transient_periods,
            *measure_periods,
            *steps_per_period,
            *decimate as usize,
        ),
        Command::AccelScale {
            amplitude,
            section_length,
            speed_kmh,
            wheel_base,
            wagon_height,
        } => cmd_accel_scale(
            cli,
            *amplitude,
            *section_length,
            *speed_kmh,
            *wheel_base,
            *wagon_height,
        ),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

/// Resolve `--format` against a command's default and supported set.
fn resolve_format(cli: &Cli, default: Format, supported: &[Format]) -> Result<Format, Failure> {
    let format = cli.format.unwrap_or(default);
    if supported.contains(&format) {
        Ok(format)
    } else {
        Err(fail(
            2,
            format!(
                "--format {} is not supported by this command",
                format.name()
            ),
        ))
    }
}

/// Vehicle parameters from `--params`, or the defaults; the second element is
/// the manifest's `params_source` string.
fn load_params(cli: &Cli) -> Result<(VehicleParams, String), Failure> {
    match &cli.params {
        Some(path) => {
            let params = VehicleParams::from_config_path(path)
                .map_err(|e| fail(params_exit(&e), format!("{}: {e}", path.display())))?;
            Ok((params, path.display().to_string()))
        }
        None => Ok((VehicleParams::default(), "defaults(NT-11)".to_string())),
    }
}

/// Deliver the payload: to `--out` (plus a run manifest) or to stdout.
fn emit(
    cli: &Cli,
    command: &str,
    inputs: &[String],
    params_source: &str,
    payload: &str,
) -> RunResult {
    match &cli.out {
        Some(out) => {
            fs::write(out, payload)
                .map_err(|e| fail(2, format!("cannot write {}: {e}", out.display())))?;
            let manifest = json!({
                "command": command,
                "inputs": inputs,
                "outputs": [out.display().to_string()],
                "params_source": params_source,
                "tool_version": env!("CARGO_PKG_VERSION"),
            });
            let manifest_path = manifest_path_for(out);
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
            fs::write(&manifest_path, text + "\n")
                .map_err(|e| fail(2, format!("cannot write {}: {e}", manifest_path.display())))?;
        }
        None => stdout_write(payload),
    }
    Ok(())
}

/// `<out>.manifest.json`, appended to the full file name.
fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn json_payload(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialises");
    text.push('\n');
    text
}

fn params_exit(_: &ParamsError) -> i32 {
    2
}

fn regression_exit(e: &RegressionError) -> i32 {
    match e {
        RegressionError::EmptyTable
        | RegressionError::InsufficientRows { .. }
        | RegressionError::SingularDesign => 3,
        _ => 2,
    }
}

fn resonance_exit(e: &ResonanceError) -> i32 {
    match e {
        ResonanceError::DegenerateParams { .. } => 3,
        ResonanceError::InvalidRange { .. } => 2,
    }
}

fn timedomain_exit(e: &TimeDomainError) -> i32 {
    match e {
        TimeDomainError::NonFinite { .. } => 4,
        _ => 2,
    }
}

// ---------------------------------------------------------------------------
// regress
// ---------------------------------------------------------------------------

fn cmd_regress(cli: &Cli, csv: Option<&Path>) -> RunResult {
    resolve_format(cli, Format::Json, &[Format::Json])?;
    let (table, inputs) = match csv {
        Some(path) => {
            let table = ObservationTable::from_csv_path(path)
                .map_err(|e| fail(regression_exit(&e), e.to_string()))?;
            (table, vec![path.display().to_string()])
        }
        None => (ObservationTable::nt11(), vec!["builtin:nt11".to_string()]),
    };
    let result = fit(&table).map_err(|e| fail(regression_exit(&e), e.to_string()))?;

    say(format!(
        "beta = [{}, {}, {}, {}] (intercept; per km; per stop; per km/h)",
        fmt_csv(result.beta[0]),
        fmt_csv(result.beta[1]),
        fmt_csv(result.beta[2]),
        fmt_csv(result.beta[3]),
    ));
    say(format!(
        "relative error = {}",
        fmt_csv(result.relative_error)
    ));
    let rows = table.rows();
    let mean_stop_freq = rows
        .iter()
        .map(|r| stopping_frequency(r.stops, r.distance_km).expect("distances are positive"))
        .sum::<f64>()
        / rows.len() as f64;
    say(format!(
        "mean stopping frequency = {} stops/km; dominant predictor: {}",
        fmt_csv(mean_stop_freq),
        dominant_predictor(&table, &result.beta),
    ));

    emit(
        cli,
        "regress",
        &inputs,
        "n/a (regression uses no vehicle parameters)",
        &json_payload(&result.to_json()),
    )
}

/// Name of the predictor with the largest `|beta| * spread` effect — the
/// interpretation the report surfaces next to the raw coefficients.
fn dominant_predictor(table: &ObservationTable, beta: &[f64; 4]) -> &'static str {
    let spread = |values: Vec<f64>| -> f64 {
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        max - min
    };
    let rows = table.rows();
    let effects = [
        (
            "distance",
            beta[1].abs() * spread(rows.iter().map(|r| r.distance_km).collect()),
        ),
        (
            "stops",
            beta[2].abs() * spread(rows.iter().map(|r| f64::from(r.stops)).collect()),
        ),
        (
            "speed",
            beta[3].abs() * spread(rows.iter().map(|r| r.speed_kmh).collect()),
        ),
    ];
    effects
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("three candidates")
        .0
}

// ---------------------------------------------------------------------------
// resonance
// ---------------------------------------------------------------------------

fn cmd_resonance(cli: &Cli, section_length: f64) -> RunResult {
    resolve_format(cli, Format::Json, &[Format::Json])?;
    let (params, params_source) = load_params(cli)?;
    let report = ResonanceReport::compute(&params, section_length)
        .map_err(|e| fail(resonance_exit(&e), e.to_string()))?;

    say(format!(
        "natural frequencies (Hz): exact {} / {}; asymptotic {} / {}",
        fmt_csv(report.f_exact_low_hz),
        fmt_csv(report.f_exact_high_hz),
        fmt_csv(report.f_asymptotic_low_hz),
        fmt_csv(report.f_asymptotic_high_hz),
    ));
    say(format!(
        "critical speeds (L = {} m): low {} km/h ({} m/s); high {} km/h ({} m/s)",
        fmt_csv(report.section_length_m),
        fmt_csv(report.u_crit_low.kmh),
        fmt_csv(report.u_crit_low.mps),
        fmt_csv(report.u_crit_high.kmh),
        fmt_csv(report.u_crit_high.mps),
    ));

    let inputs = input_list(cli);
    emit(
        cli,
        "resonance",
        &inputs,
        &params_source,
        &json_payload(&report.to_json()),
    )
}

/// Input files of a params-driven command: just the config, when given.
fn input_list(cli: &Cli) -> Vec<String> {
    cli.params
        .as_ref()
        .map(|p| vec![p.display().to_string()])
        .unwrap_or_default()
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(
    cli: &Cli,
    section_length: f64,
    amplitude: f64,
    from_kmh: f64,
    to_kmh: f64,
    steps: usize,
) -> RunResult {
    let format = resolve_format(cli, Format::Csv, &[Format::Csv, Format::Json])?;
    let (params, params_source) = load_params(cli)?;
    let table = speed_sweep(&params, section_length, amplitude, from_kmh, to_kmh, steps)
        .map_err(|e| fail(resonance_exit(&e), e.to_string()))?;

    match table.peak() {
        Some((index, row)) => {
            let boundary = if index == 0 || index == table.rows.len() - 1 {
                " [grid boundary, not a resonance peak]"
            } else {
                ""
            };
            say(format!(
                "peak |x|/A = {} at u = {} km/h (row {} of {}){}",
                fmt_csv(row.mag_x),
                fmt_csv(row.u_kmh),
                index + 1,
                table.rows.len(),
                boundary,
            ));
        }
        None => say("no regular rows: every grid point hits a resonant singularity".to_string()),
    }

    let payload = match format {
        Format::Csv => table.to_csv(),
        Format::Json => json_payload(&table.to_json()),
    };
    let inputs = input_list(cli);
    emit(cli, "sweep", &inputs, &params_source, &payload)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(
    cli: &Cli,
    amplitude: f64,
    omega: f64,
    transient_periods: u32,
    measure_periods: u32,
    steps_per_period: u32,
    decimate: usize,
) -> RunResult {
    resolve_format(cli, Format::Csv, &[Format::Csv])?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(fail(2, format!("omega must be positive, got {omega}")));
    }
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(fail(
            2,
            format!("amplitude must be nonnegative, got {amplitude}"),
        ));
    }
    if measure_periods == 0 {
        return Err(fail(2, "at least one measurement period is required"));
    }
    let total_periods = transient_periods
        .checked_add(measure_periods)
        .ok_or_else(|| fail(2, "transient + measure periods overflows"))?;

    let (params, params_source) = load_params(cli)?;
    let cfg = SimConfig::for_forcing(omega, transient_periods, measure_periods, steps_per_period);
    let trajectory = simulate(&params, amplitude, omega, &cfg, [0.0; 4])
        .map_err(|e| fail(timedomain_exit(&e), simulate_error_text(&e)))?;

    // An undamped run cannot settle; if the response kept growing across the
    // whole window the extraction below would be meaningless, so report the
    // resonance instead of pretending there is a steady state.
    let undamped = params.secondary_damping == 0.0 && params.primary_damping == 0.0;
    if undamped && amplitude > 0.0 {
        if let Ok(ratio) = trajectory.first_last_period_peak_ratio(omega) {
            let threshold = (f64::from(total_periods) / 2.0).max(4.0);
            if ratio > threshold {
                return Err(fail(
                    4,
                    format!(
                        "undamped resonance growth detected: first-to-last period peak ratio {} over {} periods",
                        fmt_csv(ratio),
                        total_periods,
                    ),
                ));
            }
        }
    }

    let (amp_x, amp_y) = steady_state_amplitude(&trajectory, omega, &cfg)
        .map_err(|e| fail(timedomain_exit(&e), e.to_string()))?;
    let predicted = respond(&params, omega, amplitude).map_err(|e| match e {
        FreqResponseError::ResonantSingularity { .. } => fail(3, e.to_string()),
    })?;
    let (pred_x, pred_y) = (predicted.x0.norm(), predicted.y0.norm());

    say(format!(
        "forcing: A = {} m, omega = {} rad/s, {} periods at {} steps/period",
        fmt_csv(amplitude),
        fmt_csv(omega),
        total_periods,
        steps_per_period,
    ));
    say(format!(
        "steady-state |x| = {} m; predicted {} m; relative difference = {}",
        fmt_csv(amp_x),
        fmt_csv(pred_x),
        fmt_csv(relative_difference(amp_x, pred_x)),
    ));
    say(format!(
        "steady-state |y| = {} m; predicted {} m; relative difference = {}",
        fmt_csv(amp_y),
        fmt_csv(pred_y),
        fmt_csv(relative_difference(amp_y, pred_y)),
    ));

    let inputs = input_list(cli);
    emit(
        cli,
        "simulate",
        &inputs,
        &params_source,
        &trajectory.to_csv(decimate),
    )
}

/// Difference of `measured` against `predicted`, relative where possible.
fn relative_difference(measured: f64, predicted: f64) -> f64 {
    if predicted > 0.0 {
        (measured - predicted).abs() / predicted
    } else {
        measured.abs()
    }
}

fn simulate_error_text(e: &TimeDomainError) -> String {
    match e {
        TimeDomainError::NonFinite { time } => format!(
            "undamped resonance growth detected: state no longer finite at t = {} s",
            fmt_csv(*time),
        ),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// accel-scale
// ---------------------------------------------------------------------------

fn cmd_accel_scale(
    cli: &Cli,
    amplitude: f64,
    section_length: f64,
    speed_kmh: f64,
    wheel_base: f64,
    wagon_height: f64,
) -> RunResult {
    resolve_format(cli, Format::Json, &[Format::Json])?;
    if !(speed_kmh >= 0.0) || !speed_kmh.is_finite() {
        return Err(fail(
            2,
            format!("speed must be nonnegative, got {speed_kmh}"),
        ));
    }
    let profile =
        RailProfile::cosine(amplitude, section_length).map_err(|e| fail(2, e.to_string()))?;
    let geometry =
        GeometryParams::new(wheel_base, wagon_height).map_err(|e| fail(2, e.to_string()))?;
    let speed_mps = speed_kmh / KMH_PER_MPS;
    let omega = forcing_frequency(speed_mps, section_length).map_err(|e| fail(2, e.to_string()))?;
    let (vertical, offset) = acceleration_scale(&profile, &geometry, speed_mps);

    say(format!(
        "speed = {} km/h = {} m/s",
        fmt_csv(speed_kmh),
        fmt_csv(speed_mps)
    ));
    say(format!(
        "forcing frequency = {} rad/s ({} Hz)",
        fmt_csv(omega),
        fmt_csv(omega / std::f64::consts::TAU),
    ));
    say(format!(
        "vertical acceleration scale = {} m/s^2; wagon offset scale = {} m/s^2",
        fmt_csv(vertical),
        fmt_csv(offset),
    ));

    let payload = json!({
        "amplitude_m": report_f64(amplitude),
        "section_length_m": report_f64(section_length),
        "speed_kmh": report_f64(speed_kmh),
        "speed_mps": report_f64(speed_mps),
        "omega_rad_s": report_f64(omega),
        "frequency_hz": report_f64(omega / std::f64::consts::TAU),
        "vertical_scale_m_s2": report_f64(vertical),
        "offset_scale_m_s2": report_f64(offset),
        "wheel_base_m": report_f64(wheel_base),
        "wagon_height_m": report_f64(wagon_height),
    });
    emit(
        cli,
        "accel-scale",
        &[],
        "n/a (kinematics only)",
        &json_payload(&payload),
    )
}
