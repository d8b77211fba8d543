//! Command-line front end: instance documents and the `check`, `solve`,
//! `sufficiency`, `generate` and `gap` subcommands.

pub mod commands;
pub mod document;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{Fixture, Mode, Report};
use document::{read_instance, ParseError};

pub const DEFAULT_MAX_VERTICES: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spflow::Error),
}

#[derive(Debug, Parser)]
#[command(name = "spflow", version, about = "Multicommodity flow on series-parallel networks")]
pub struct Cli {
    /// Largest vertex count accepted from documents and generators.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Write the certificate document of the command to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_certificates: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut condition, worst cut and Eulerian parity.
    Check { file: PathBuf },
    /// Route the instance.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Fractional)]
        mode: Mode,
    },
    /// Decide cut-sufficiency of the supply/demand pair.
    Sufficiency { file: PathBuf },
    /// Print a fixture document.
    Generate {
        #[command(subcommand)]
        fixture: Fixture,
    },
    /// Search for the worst congestion of the pair by alternating congestion
    /// and cut-metric programs.
    Gap {
        file: PathBuf,
        #[arg(long, default_value_t = spflow::lp::MAX_ROUNDS)]
        rounds: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load(path: &PathBuf, max_vertices: usize) -> Result<spflow::Instance, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    read_instance(&text, max_vertices).map_err(|source| CliError::Parse { path: shown, source })
}

/// Runs a parsed command line and returns what to print and the exit code.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let max = cli.max_vertices.min(spflow::MAX_VERTICES);
    let report = match &cli.command {
        Command::Check { file } => commands::check(&load(file, max)?)?,
        Command::Solve { file, mode } => commands::solve(&load(file, max)?, *mode)?,
        Command::Sufficiency { file } => commands::sufficiency(&load(file, max)?)?,
        Command::Generate { fixture } => commands::generate(fixture, max)?,
        Command::Gap { file, rounds, seed } => commands::gap(&load(file, max)?, *rounds, *seed)?,
    };
    if let (Some(path), Some(doc)) = (&cli.emit_certificates, &report.certificate) {
        std::fs::write(path, doc).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    Ok(report)
}
