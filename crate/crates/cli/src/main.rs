use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod output;
mod verify;

use output::Format;

/// Bound states of the one-dimensional hydrogen atom with a flat-bottomed core.
#[derive(Debug, Parser)]
#[command(name = "coulomb1d", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues for one cutoff.
    Spectrum(SpectrumArgs),
    /// Solved quantum defects next to their small-cutoff predictions.
    Deviations(DeviationsArgs),
    /// One eigenfunction sampled on a symmetric grid.
    Wavefunction(WavefunctionArgs),
    /// Runs the invariant suites and writes a pass/fail report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityChoice {
    Even,
    Odd,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Root tolerance on β; overrides COULOMB1D_TOL.
    #[arg(long)]
    pub beta_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 3)]
    pub nmax: u32,
    #[arg(long, value_enum, default_value_t = ParityChoice::Both)]
    pub parity: ParityChoice,
    /// Defaults to spectrum.<format>.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct DeviationsArgs {
    /// Comma-separated cutoffs.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub nmax: u32,
    #[arg(long, default_value = "deviations.csv")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub parity: coulomb1d::Parity,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 20.0)]
    pub xmax: f64,
    /// Odd, so that the grid contains the origin.
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    /// Adds the δ → 0 limiting profile as a fourth column.
    #[arg(long)]
    pub limiting: bool,
    #[arg(long, default_value = "wavefunction.csv")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    pub level: Level,
    #[arg(long, default_value = "verify-report.json")]
    pub out: PathBuf,
    /// Replaces every check's tolerance.
    #[arg(long)]
    pub tol_override: Option<f64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) | CliError::VerifyFailed(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Deviations(a) => commands::deviations(&a),
        Command::Wavefunction(a) => commands::wavefunction(&a),
        Command::Verify(a) => verify::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
