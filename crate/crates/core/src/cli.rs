//! Command implementations behind the `osc` binary.
//!
//! Exit codes: 0 success, 2 config or input error, 3 spectrum error
//! (degenerate or non-oscillatory), 4 unwritable output, 5 oracle step too
//! large, 6 grid mismatch in `compare`.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{verify_decay, BoundReport};
use crate::config::{ConfigError, GridSpec, Scenario};
use crate::eigen::solve_eigen;
use crate::error::Error;
use crate::oracle;
use crate::response::{forced_response, Trajectory};

/// Sample times of two files must agree to this absolute tolerance.
pub const GRID_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Compute(Error),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Compute(Error::DegenerateSpectrum(..) | Error::NotOscillatory) => 3,
            CliError::Compute(Error::StepTooLarge { .. }) => 5,
            CliError::Compute(_) => 2,
            CliError::Output { .. } => 4,
            CliError::GridMismatch(_) => 6,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Compute(err)
    }
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn format_number(value: f64) -> String {
    format!("{value:.16e}")
}

#[derive(Debug, Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct EigenJson {
    roots: Vec<ComplexJson>,
    residues: Vec<ComplexJson>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    oscillatory: bool,
}

pub fn cmd_eigen(scenario: &Scenario) -> Result<String, CliError> {
    let eig = solve_eigen(&scenario.params)?;
    let pack = |zs: [num_complex::Complex64; 3]| {
        zs.iter()
            .map(|z| ComplexJson { re: z.re, im: z.im })
            .collect()
    };
    let doc = EigenJson {
        roots: pack(eig.roots()),
        residues: pack(eig.residues()),
        alpha: eig.alpha(),
        beta: eig.beta(),
        gamma: eig.gamma(),
        oscillatory: eig.is_oscillatory(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("eigen JSON"))
}

fn grid(scenario: &Scenario) -> Result<&GridSpec, CliError> {
    scenario
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Input("grid: missing (set it in the config or pass --t-end and --dt)".into()))
}

/// Writes `t,x,xdot,psi` rows.
pub fn write_trajectory(trajectory: &Trajectory, out: &mut dyn Write) -> std::io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["t", "x", "xdot", "psi"])?;
    for s in &trajectory.samples {
        w.write_record([s.t, s.x, s.xdot, s.psi].map(format_number))?;
    }
    w.flush()
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Opens `path` (or stdout) and hands the writer to `emit`.
fn with_output(
    path: Option<&Path>,
    emit: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let output_err = |e: std::io::Error| CliError::Output {
        path: path.map_or("<stdout>".into(), |p| p.display().to_string()),
        message: e.to_string(),
    };
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(output_err)?;
            let mut buf = std::io::BufWriter::new(file);
            emit(&mut buf).map_err(output_err)?;
            buf.flush().map_err(output_err)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock).map_err(output_err)
        }
    }
}

/// Closed-form response when unforced, trapezoid convolution otherwise.
pub fn respond(scenario: &Scenario) -> Result<Trajectory, CliError> {
    let g = grid(scenario)?;
    Ok(forced_response(
        &scenario.params,
        &scenario.initial,
        &scenario.history,
        &scenario.forcing,
        g.t_end,
        g.dt,
    )?)
}

pub fn cmd_respond(scenario: &Scenario, out: Option<&Path>) -> Result<(), CliError> {
    let trajectory = respond(scenario)?;
    with_output(out, |w| write_trajectory(&trajectory, w))
}

pub fn cmd_oracle(scenario: &Scenario, out: Option<&Path>) -> Result<(), CliError> {
    let g = grid(scenario)?;
    let run = oracle::integrate(
        &scenario.params,
        &scenario.initial,
        &scenario.history,
        &scenario.forcing,
        g.t_end,
        g.dt,
    )?;
    with_output(out, |w| write_trajectory(&run.trajectory, w))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub max_abs_diff_x: f64,
    pub max_abs_diff_xdot: f64,
    pub rows: usize,
}

/// Reads the `t`, `x`, `xdot` columns of a trajectory CSV.
pub fn read_trajectory_columns(path: &Path) -> Result<Vec<[f64; 3]>, CliError> {
    let bad = |message: String| CliError::Input(format!("{}: {message}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let cols = [column("t")?, column("x")?, column("xdot")?];
    reader
        .records()
        .enumerate()
        .map(|(line, record)| {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let mut row = [0.0; 3];
            for (slot, &i) in row.iter_mut().zip(&cols) {
                *slot = record
                    .get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(format!("row {}: unreadable number", line + 2)))?;
            }
            Ok(row)
        })
        .collect()
}

pub fn compare(a: &Path, b: &Path) -> Result<Comparison, CliError> {
    let left = read_trajectory_columns(a)?;
    let right = read_trajectory_columns(b)?;
    if left.len() != right.len() {
        return Err(CliError::GridMismatch(format!(
            "{} has {} rows, {} has {}",
            a.display(),
            left.len(),
            b.display(),
            right.len()
        )));
    }
    let mut cmp = Comparison {
        max_abs_diff_x: 0.0,
        max_abs_diff_xdot: 0.0,
        rows: left.len(),
    };
    for (i, (l, r)) in left.iter().zip(&right).enumerate() {
        if !((l[0] - r[0]).abs() <= GRID_TOLERANCE) {
            return Err(CliError::GridMismatch(format!(
                "row {}: t = {} vs {}",
                i + 2,
                l[0],
                r[0]
            )));
        }
        cmp.max_abs_diff_x = cmp.max_abs_diff_x.max((l[1] - r[1]).abs());
        cmp.max_abs_diff_xdot = cmp.max_abs_diff_xdot.max((l[2] - r[2]).abs());
    }
    Ok(cmp)
}

pub fn cmd_compare(a: &Path, b: &Path) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(&compare(a, b)?).expect("comparison JSON"))
}

#[derive(Debug, Serialize)]
struct TailJson {
    i1: f64,
    i2: f64,
    x: f64,
}

#[derive(Debug, Serialize)]
struct BoundsSummary {
    rows: usize,
    bounds_satisfied: bool,
    undamped: bool,
    rho: Option<f64>,
    horizon: Option<f64>,
    amplitude_scale: f64,
    tail: Option<TailJson>,
    tail_ok: Option<bool>,
    envelope_decreasing: Option<bool>,
    all_satisfied: bool,
}

pub fn bounds_report(scenario: &Scenario) -> Result<BoundReport, CliError> {
    let g = grid(scenario)?;
    Ok(verify_decay(
        &scenario.params,
        &scenario.initial,
        &scenario.history,
        g.t_end,
        g.dt,
    )?)
}

pub fn write_bound_rows(report: &BoundReport, out: &mut dyn Write) -> std::io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["t", "I1_abs", "B1", "I2_abs", "B2", "ok1", "ok2"])?;
    for r in &report.rows {
        w.write_record([
            format_number(r.t),
            format_number(r.i1_abs),
            format_number(r.b1),
            format_number(r.i2_abs),
            format_number(r.b2),
            r.ok1.to_string(),
            r.ok2.to_string(),
        ])?;
    }
    w.flush()
}

pub fn bounds_summary_json(report: &BoundReport) -> String {
    let summary = BoundsSummary {
        rows: report.rows.len(),
        bounds_satisfied: report.bounds_satisfied(),
        undamped: report.undamped,
        rho: report.rho,
        horizon: report.horizon,
        amplitude_scale: report.amplitude_scale,
        tail: report.tail.map(|t| TailJson {
            i1: t.i1,
            i2: t.i2,
            x: t.x,
        }),
        tail_ok: report.tail_ok,
        envelope_decreasing: report.envelope_decreasing,
        all_satisfied: report.all_satisfied(),
    };
    serde_json::to_string_pretty(&summary).expect("bounds JSON")
}

/// Writes the per-row CSV to `out` and returns the JSON summary.
///
/// Without `out` the CSV is skipped so stdout carries only the summary.
pub fn cmd_bounds(scenario: &Scenario, out: Option<&Path>) -> Result<String, CliError> {
    let report = bounds_report(scenario)?;
    if let Some(path) = out {
        with_output(Some(path), |w| write_bound_rows(&report, w))?;
    }
    Ok(bounds_summary_json(&report))
}
