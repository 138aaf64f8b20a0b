//! `stripspec <command> --config <path> [--out <dir>] [--seed <int>]`
//!
//! Exit codes: 0 ok, 1 config or input error, 2 strip hypothesis violated,
//! 3 solver failure, 4 verification failure.

mod commands;
mod config;
mod plot;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("strip hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<stripspec_core::Error> for CliError {
    fn from(e: stripspec_core::Error) -> Self {
        use stripspec_core::Error as E;
        match e {
            E::HypothesisViolated(_) => CliError::Hypothesis(e.to_string()),
            E::FactorizationFailed { .. } | E::TooLarge { .. } | E::InsufficientPairs { .. } | E::Inconsistent(_) => {
                CliError::Solver(e.to_string())
            }
            E::Io(_) => CliError::Output(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Non-overlap and thinness checks plus the reference-curve trace.
    Geometry,
    /// Lowest eigenvalues and the bound-state count.
    Spectrum,
    /// Closed-form threshold bounds against the numeric minimizers.
    Bounds,
    /// Gap and count along a parameter axis.
    Sweep,
    /// The acceptance suite.
    Verify,
    /// SVG figures from earlier outputs.
    Plot,
}

#[derive(Debug, Parser)]
#[command(name = "stripspec", version, about = "Spectral laboratory for curved planar strips")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solver seed; overrides `solver.seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.solver.seed = seed;
    }
    std::fs::create_dir_all(&cfg.output_dir)?;
    match cli.command {
        Command::Geometry => commands::geometry(&cfg),
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Bounds => commands::bounds(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Plot => plot::plot(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stripspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
