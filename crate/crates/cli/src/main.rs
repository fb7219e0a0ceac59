mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};

/// Bound-continuum transition integrals with complex Gaussian continua.
#[derive(Parser)]
#[command(name = "cgint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration; every table is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the fit and the identity suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Basis file (written by `fit`, read by the other verbs).
    #[arg(long, global = true)]
    basis: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance of the reference quadrature.
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the complex Gaussian basis and write it with a residual report.
    Fit,
    /// Closed-form amplitudes through both formulations.
    Amplitude,
    /// Compare closed forms against the quadrature reference, per truncation L.
    Validate,
    /// CSV table over the configured exponents and the basis energy grid.
    Sweep,
    /// Run the identity suites.
    Identities {
        /// Run only the named suite (repeatable).
        #[arg(long)]
        only: Vec<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(cgint::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Core(e) => e.fmt(f),
            Self::Io(e) => e.fmt(f),
        }
    }
}

impl From<cgint::Error> for CliError {
    fn from(e: cgint::Error) -> Self {
        Self::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use cgint::Error as E;
        match self {
            Self::Config(_) | Self::Core(E::Config(_) | E::Format(_) | E::Index(_) | E::Json(_)) => 2,
            _ => 1,
        }
    }
}

fn run(cli: Cli) -> Result<Option<String>, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let overrides = Overrides {
        seed: cli.seed,
        basis: cli.basis,
        out: cli.out,
        tol_rel: cli.tol_rel,
        only: match &cli.command {
            Command::Identities { only } => only.clone(),
            _ => Vec::new(),
        },
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    let output = match cli.command {
        Command::Fit => commands::fit(&cfg)?,
        Command::Amplitude => commands::amplitude(&cfg)?,
        Command::Validate => commands::validate(&cfg)?,
        Command::Sweep => commands::sweep(&cfg)?,
        Command::Identities { .. } => commands::identities(&cfg)?,
    };
    match &cfg.output.out {
        Some(path) => std::fs::write(path, &output.text)?,
        None => print!("{}", output.text),
    }
    Ok(output.failure)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("cgint: {failure}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("cgint: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
