//! Sweep harness for the `rabi` command-line tool.

pub mod config;
pub mod plot;
pub mod sweep;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rabi_core::varground::{scan_bracket, LandscapeResult, Regime, SCAN_POINTS};
use rabi_core::ModelParams;

use table::{fmt_num, write_rows, Row, LANDSCAPE_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}: {1}")]
    Io(String, #[source] io::Error),
    #[error("{0}: {1}")]
    Csv(String, #[source] csv::Error),
    #[error(transparent)]
    Model(#[from] rabi_core::Error),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv("output".into(), e)
    }
}

/// What a successful run produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    /// Some variational rows fell in the multi-minimum regime.
    InvalidRegime,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Clean => 0,
            Outcome::InvalidRegime => 2,
        }
    }

    fn from_rows(rows: &[Row]) -> Outcome {
        if rows.iter().any(Row::invalid) {
            Outcome::InvalidRegime
        } else {
            Outcome::Clean
        }
    }
}

fn with_output(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| CliError::Io(path.display().to_string(), e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}

/// Writes a plot script next to `csv_path` (same stem, `.py`).
pub fn emit_plot_script(csv_path: &Path) -> Result<PathBuf, CliError> {
    let script = plot::plot_script(csv_path)?;
    let target = csv_path.with_extension("py");
    std::fs::write(&target, script).map_err(|e| CliError::Io(target.display().to_string(), e))?;
    Ok(target)
}

fn finish(rows: &[Row], out: Option<&Path>, plot: bool) -> Result<Outcome, CliError> {
    if plot && out.is_none() {
        return Err(CliError::Config("--plot needs --out".into()));
    }
    with_output(out, |w| write_rows(w, rows))?;
    if let (true, Some(path)) = (plot, out) {
        emit_plot_script(path)?;
    }
    Ok(Outcome::from_rows(rows))
}

pub fn run_ground_sweep(cfg: &config::SweepConfig) -> Result<Outcome, CliError> {
    let rows = sweep::ground_rows(cfg)?;
    finish(&rows, cfg.output_path.as_deref(), cfg.emit_plot_script)
}

pub fn run_excited_sweep(cfg: &config::SweepConfig) -> Result<Outcome, CliError> {
    let rows = sweep::excited_rows(cfg)?;
    finish(&rows, cfg.output_path.as_deref(), cfg.emit_plot_script)
}

pub fn run_experiment(g_points: usize, out: Option<&Path>, plot: bool) -> Result<Outcome, CliError> {
    let rows = sweep::experiment_rows(g_points)?;
    finish(&rows, out, plot)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeRequest {
    pub omega: f64,
    pub big_omega: f64,
    pub g: f64,
    pub lambda_lo: Option<f64>,
    pub lambda_hi: Option<f64>,
    pub points: Option<usize>,
}

pub fn landscape_result(req: &LandscapeRequest) -> Result<LandscapeResult, CliError> {
    let params = ModelParams::new(req.omega, req.big_omega, req.g)?;
    let (lo, hi) = scan_bracket(&params);
    sweep::landscape(
        &params,
        req.lambda_lo.unwrap_or(lo),
        req.lambda_hi.unwrap_or(hi),
        req.points.unwrap_or(SCAN_POINTS),
    )
}

/// Grid rows, then one `minimum,λ,K` footer row per refined minimum and a
/// final `classification,<regime>` row.
pub fn write_landscape<W: Write>(out: W, land: &LandscapeResult) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(LANDSCAPE_HEADER)?;
    for ((l, k), c) in land.lambda_grid.iter().zip(&land.k_values).zip(&land.components) {
        let mut rec = vec![fmt_num(*l), fmt_num(*k)];
        rec.extend(c.iter().map(|x| fmt_num(*x)));
        w.write_record(&rec)?;
    }
    for (l, k) in &land.minima {
        w.write_record([String::from("minimum"), fmt_num(*l), fmt_num(*k)])?;
    }
    w.write_record(["classification", land.classification.as_str()])?;
    w.flush().map_err(|e| CliError::Io("output".into(), e))?;
    Ok(())
}

pub fn run_landscape(req: &LandscapeRequest, out: Option<&Path>, plot: bool) -> Result<Outcome, CliError> {
    if plot && out.is_none() {
        return Err(CliError::Config("--plot needs --out".into()));
    }
    let land = landscape_result(req)?;
    with_output(out, |w| write_landscape(w, &land))?;
    if let (true, Some(path)) = (plot, out) {
        emit_plot_script(path)?;
    }
    Ok(if land.classification == Regime::MultiMinimum { Outcome::InvalidRegime } else { Outcome::Clean })
}

pub fn run_plot_script(csv_path: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let script = plot::plot_script(csv_path)?;
    with_output(out, |w| w.write_all(script.as_bytes()).map_err(|e| CliError::Io("output".into(), e)))?;
    Ok(Outcome::Clean)
}
