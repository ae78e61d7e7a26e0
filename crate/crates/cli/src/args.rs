use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detloci_core::random::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "detloci", version, about = "Angles between subspaces, Grassmannian geometry and Chern numbers of determinantal loci")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Base seed; decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    /// Trials per suite. Defaults to 10000, or to each suite's own count under `verify`.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = parse_tol)]
    pub tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Omit wall-clock durations so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Worker threads per suite.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub jobs: u64,
    /// Force this trial index to fail (exercises counterexample replay).
    #[arg(long, global = true)]
    pub inject_failure: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an angle property suite, or measure the angles of a subspace pair.
    Angles {
        /// Suite name; all angle suites when neither this nor --input is given.
        #[arg(long, conflicts_with = "input")]
        suite: Option<String>,
        /// `{"u": subspace, "v": subspace}` with subspaces as `{"ambient_dim", "basis"}`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Plücker coordinates, charts, distances, curvature and compound matrices.
    Grassmann {
        #[command(subcommand)]
        action: GrassmannAction,
    },
    /// Chern numbers of determinantal loci.
    Chern {
        #[command(subcommand)]
        action: ChernAction,
    },
    /// Every property suite, then the acceptance checks.
    Verify,
    /// Recompute the trial recorded in a counterexample blob.
    Replay {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GrassmannAction {
    /// Plücker coordinates of the row span of a matrix, with relation residuals.
    Pluecker {
        #[arg(long)]
        input: PathBuf,
        /// Exact rational arithmetic.
        #[arg(long)]
        rational: bool,
    },
    /// Standard chart coordinates `A⁻¹B` of `[A | B]`.
    Chart {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fubini–Study distance between `{"p": matrix, "q": matrix}`.
    Distance {
        #[arg(long)]
        input: PathBuf,
    },
    /// Curvature of the universal bundle at the base point along a tangent `r × (N−r)` matrix.
    Curvature {
        #[arg(long)]
        input: PathBuf,
    },
    /// Matrix of `l × l` minors.
    Compound {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        rational: bool,
    },
    /// Run Grassmannian property suites.
    Suite {
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChernAction {
    /// Tables for the two worked families.
    Examples {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Invariants of a problem given as JSON.
    Solve {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run Chern property suites.
    Suite {
        #[arg(long)]
        suite: Option<String>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}
