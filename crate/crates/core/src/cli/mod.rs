//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 mathematical
//! precondition failure (defective distribution, wrong chain kind, failed
//! verification).

mod commands;
mod render;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::chain::{parse_chain_file, Chain, ChainError};
use crate::hitting::HittingError;
use crate::oracle::OracleError;

pub use render::{chain_digest, format_float};

#[derive(Debug, Parser)]
#[command(name = "absorption", version, about = "Exact absorption-time distributions for finite absorbing Markov chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform, absorption probability, mean and variance per start state.
    Analyze {
        file: PathBuf,
        #[arg(long, conflicts_with = "all_starts")]
        start: Option<usize>,
        #[arg(long)]
        all_starts: bool,
    },
    /// Exact probability mass function of a discrete chain.
    Pmf {
        file: PathBuf,
        #[arg(long)]
        start: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cumulative distribution at the given times (uniformization for
    /// continuous chains, exact for discrete chains).
    Cdf {
        file: PathBuf,
        #[arg(long)]
        start: usize,
        /// Comma-separated times, e.g. "0.5,1,2".
        #[arg(long = "t")]
        times: String,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Skip-free verdict, spectrum, product-form parameters and identity checks.
    Decompose { file: PathBuf },
    /// Seeded Monte Carlo summary.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        start: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = crate::oracle::McConfig::DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },
    /// First-step residuals, oracle cross-checks and the factorization identity.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Math(_) => 2,
        }
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Input(format!("{e}"))
    }
}

impl From<HittingError> for CliError {
    fn from(e: HittingError) -> Self {
        match e {
            HittingError::StartOutOfRange { .. } => CliError::Input(format!("{e}")),
            other => CliError::Math(format!("{other}")),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::StartOutOfRange { .. } | OracleError::InvalidConfig(_) => {
                CliError::Input(format!("{e}"))
            }
            other => CliError::Math(format!("{other}")),
        }
    }
}

/// What a finished invocation writes and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn load(path: &Path) -> Result<Chain, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_chain_file(&text)?)
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("absorption")).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let echo: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::execute(&cli.command, echo) {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}
