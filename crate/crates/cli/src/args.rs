use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::rational::parse_rational;

#[derive(Debug, Parser)]
#[command(name = "qhorn", version, about = "Quantum Horn body computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// The function-space combination of the two endpoint distributions.
    Sigma,
    /// A single point `ν_t` of the image, as a sanity baseline.
    Image,
}

fn rational(text: &str) -> Result<BigRational, String> {
    parse_rational(text)
}

fn grid(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("`{text}` is not a grid size (need an integer ≥ 2)")),
    }
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{text}` is not a positive integer")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue functions of the endpoint distributions and their combination on the quarters of [0, 1).
    Table {
        #[arg(long, value_parser = rational)]
        s: BigRational,
        #[arg(long, value_parser = rational)]
        r: BigRational,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact certificate that the combination lies outside the asymptotic body.
    Certify {
        #[arg(long, value_parser = rational)]
        s: BigRational,
        #[arg(long, value_parser = rational)]
        r: BigRational,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Grid LP distance from a target to the image of the parametrisation.
    Probe {
        #[arg(long, value_parser = rational)]
        s: BigRational,
        /// Ratio for a single sigma target.
        #[arg(long, value_parser = rational, conflicts_with = "r_sweep")]
        r: Option<BigRational>,
        /// Sweep r = i/(N+1) for i = 1..=N.
        #[arg(long, value_name = "N", value_parser = positive)]
        r_sweep: Option<usize>,
        #[arg(long, value_enum, default_value = "sigma")]
        target: Target,
        /// Block parameter of an image target.
        #[arg(long, value_parser = rational)]
        t: Option<BigRational>,
        #[arg(long, default_value = "401", value_parser = grid)]
        t_grid: usize,
        #[arg(long, default_value = "4096", value_parser = grid)]
        x_grid: usize,
        /// Wall-clock limit per solve, in seconds.
        #[arg(long, default_value = "600")]
        budget_secs: f64,
        /// CSV of one row per solve, for plotting.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo points of the level-d counterexample body, as JSON lines.
    Sample {
        #[arg(long, value_parser = rational)]
        s: BigRational,
        #[arg(long, value_parser = positive)]
        d: usize,
        #[arg(long, value_parser = positive)]
        count: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Gap of every sampled point to the image of the parametrisation.
    Fit {
        /// JSON lines written by `sample`.
        cloud: PathBuf,
        #[arg(long, value_parser = rational)]
        s: BigRational,
        #[arg(long, value_parser = positive)]
        d: usize,
        #[arg(long, default_value = "401", value_parser = grid)]
        t_grid: usize,
        #[arg(long, default_value = "4096", value_parser = grid)]
        x_grid: usize,
        /// CSV of per-point gaps.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}
