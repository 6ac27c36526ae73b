use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rabi_cli::config::{Label, Method, Overrides, SweepConfig};
use rabi_cli::{CliError, LandscapeRequest, Outcome};

#[derive(Parser)]
#[command(name = "rabi", version, about = "Quantum Rabi model sweeps: exact, RWA, AA, GRWA, GVM and variational")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state energy and photon number against g.
    GroundSweep(SweepArgs),
    /// Excited-state energies and photon numbers against g.
    ExcitedSweep(SweepArgs),
    /// K(λ) on a grid with its refined minima.
    Landscape(LandscapeArgs),
    /// First and second excitation deviations at ω = 12.16 Ω.
    Experiment(ExperimentArgs),
    /// Matplotlib script for a CSV written by another subcommand.
    PlotScript(PlotArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Key-value file with defaults for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    big_omega: Option<f64>,
    #[arg(long)]
    g_start: Option<f64>,
    #[arg(long)]
    g_end: Option<f64>,
    #[arg(long)]
    g_points: Option<usize>,
    /// Comma-separated subset of exact,rwa,aa,grwa,gvm,var.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Comma-separated excited labels such as -1,+1,-2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    labels: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a plot script next to the output file.
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct LandscapeArgs {
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    big_omega: f64,
    #[arg(long)]
    g: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_hi: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 16)]
    g_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct PlotArgs {
    csv: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn resolve(self) -> Result<SweepConfig, CliError> {
        let parse_all = |v: Option<Vec<String>>| -> Result<Option<Vec<Method>>, CliError> {
            v.map(|items| items.iter().map(|s| s.parse()).collect()).transpose()
        };
        let labels: Option<Vec<Label>> =
            self.labels.map(|items| items.iter().map(|s| s.parse()).collect()).transpose()?;
        let flags = Overrides {
            omega: self.omega,
            big_omega: self.big_omega,
            g_start: self.g_start,
            g_end: self.g_end,
            g_points: self.g_points,
            methods: parse_all(self.methods)?,
            labels,
            out: self.out,
            plot: self.plot.then_some(true),
        };
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        flags.or(file).resolve(SweepConfig::default())
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::GroundSweep(args) => rabi_cli::run_ground_sweep(&args.resolve()?),
        Command::ExcitedSweep(args) => rabi_cli::run_excited_sweep(&args.resolve()?),
        Command::Landscape(a) => {
            let req = LandscapeRequest {
                omega: a.omega,
                big_omega: a.big_omega,
                g: a.g,
                lambda_lo: a.lambda_lo,
                lambda_hi: a.lambda_hi,
                points: a.points,
            };
            rabi_cli::run_landscape(&req, a.out.as_deref(), a.plot)
        }
        Command::Experiment(a) => rabi_cli::run_experiment(a.g_points, a.out.as_deref(), a.plot),
        Command::PlotScript(a) => rabi_cli::run_plot_script(&a.csv, a.out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
