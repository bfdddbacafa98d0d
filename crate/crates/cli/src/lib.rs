//! Command-line front end for the quantum Horn body computations.

pub mod args;
pub mod commands;
pub mod output;
pub mod rational;

use std::process::ExitCode;

use thiserror::Error;

pub use args::{Cli, Command};

/// Exit statuses. Anything else nonzero is an unexpected failure.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INCONCLUSIVE: u8 = 3;
    pub const BUDGET: u8 = 4;
}

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "HORNBODY_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qhorn_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(e) => match e {
                qhorn_core::Error::Solver(_) | qhorn_core::Error::Polynomial(_) => exit::FAILURE,
                _ => exit::USAGE,
            },
            _ => exit::FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Configures the thread pool from [`THREADS_ENV`].
pub fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

/// Parses `args`, the first of which is the program name.
pub fn parse_from<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    <Cli as clap::Parser>::try_parse_from(args)
}

/// Runs one parsed command and returns the status the process should exit with.
pub fn run(cli: Cli) -> ExitCode {
    let outcome = init_threads().and_then(|()| commands::dispatch(&cli.command));
    match outcome {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) || e.code() == exit::USAGE {
                eprintln!("run with --help for usage");
            }
            ExitCode::from(e.code())
        }
    }
}
