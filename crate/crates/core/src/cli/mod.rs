//! The `gyrator` command-line tool.
//!
//! Exit codes: 0 success, 2 usage, configuration or convergence failure,
//! 3 no positive-work cycle, 4 Monte Carlo verification failure.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{CycleFile, VerifyFile};
pub use config::{Header, RunConfig, DEFAULT_MU};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NO_POSITIVE_WORK: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "gyrator", version, about = "Optimal finite-time cycles of a Brownian gyrator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize one cycle and write cycle.json and cycle.csv.
    Optimize(CommonArgs),
    /// Optimize over a list of μ values and write sweep.csv.
    Sweep(SweepArgs),
    /// Verify a cycle against a Langevin ensemble and write verify.json.
    Simulate(SimulateArgs),
    /// Tabulate the metric and curvature and write geometry.csv and f_surface.csv.
    GeometryCheck(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Period ratio t_c / t_f (nondimensional mode).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Cycle period (physical mode).
    #[arg(long)]
    pub tf: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "Tx")]
    pub tx: Option<f64>,
    #[arg(long = "Ty")]
    pub ty: Option<f64>,
    #[arg(long = "kB")]
    pub kb: Option<f64>,
    #[arg(long = "ell-r")]
    pub ell_r: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub particles: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Target efficiency for an operating-point row.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// JSON configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated μ values.
    #[arg(long, value_delimiter = ',')]
    pub mus: Vec<f64>,
    /// `LO,HI,N`: N log-spaced μ values in [LO, HI].
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub mu_range: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Cycle file written by `optimize`.
    #[arg(long)]
    pub cycle: PathBuf,
}

/// Failure carrying the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    pub(crate) fn from_lib(e: crate::Error) -> Self {
        Self::usage(e.to_string())
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        Self::usage(format!("{}: {e}", path.display()))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
        CliError { code, message: e.to_string() }
    })?;
    match cli.command {
        Command::Optimize(a) => commands::optimize(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::GeometryCheck(a) => commands::geometry_check(&a),
    }
}
