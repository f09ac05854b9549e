//! Command-line interface: kernel evaluation, operator application, the
//! Calderón-Zygmund verification suite, and polynomial table dumps.
//!
//! Exit codes: 0 all checks pass, 1 a numerical check fails (disagreement
//! over tolerance, suite failure, operator precondition violation), 2
//! configuration error (bad flags, malformed input). Clap's own usage errors
//! also exit with 2.

mod apply_cmd;
mod kernel_cmd;
mod output;
mod poly_cmd;
mod verify_cmd;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

/// An error with a designated process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

/// Library errors surfacing through the CLI are configuration-shaped (bad
/// parameter ranges, malformed expansion JSON) unless a command remaps them.
impl From<jacobi_harmonics::error::Error> for CliError {
    fn from(e: jacobi_harmonics::error::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "jacobi-harmonics",
    version,
    about = "Harmonic analysis of Jacobi expansions: kernels, operators, and estimate verification"
)]
struct Cli {
    /// Worker threads for grid sweeps (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Jacobi-Poisson kernel and its derivatives.
    Kernel(kernel_cmd::KernelArgs),
    /// Apply a spectral operator to an expansion.
    Apply(apply_cmd::ApplyArgs),
    /// Run the Calderón-Zygmund estimate verification suite.
    Verify(verify_cmd::VerifyArgs),
    /// Dump a table of normalized Jacobi polynomial values.
    Poly(poly_cmd::PolyArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Kernel(args) => kernel_cmd::run(args),
        Command::Apply(args) => apply_cmd::run(args),
        Command::Verify(args) => verify_cmd::run(args),
        Command::Poly(args) => poly_cmd::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
