//! `qfree`: partitioning and freeness verification reports.

mod commands;
mod ring;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Default end-to-end tolerance for residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = qfree_core::matrix_cqg::DEFAULT_SEED;
pub const SCHEMA: u32 = 1;
const THREADS_ENV: &str = "QFREE_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit status 2.
    Input(String),
    /// A certificate or residual check failed: exit status 1.
    Check(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Check(m) => f.write_str(m),
        }
    }
}

#[derive(Parser)]
#[command(name = "qfree", version, about = "Katětov partitions and freeness witnesses for discrete (quantum) groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Serialize)]
pub struct Common {
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// End-to-end tolerance override
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for intertwiner construction and random coefficients
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Suppress the human-readable summary on stderr
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Labels, dimensions and fusion-axiom checks of a ring
    FusionInfo {
        #[arg(long)]
        ring: String,
        /// Number of labels to check for infinite rings
        #[arg(long)]
        window: Option<usize>,
    },
    /// (2N+1)-coloring of an edge-list multifunction
    Partition {
        /// Lines `x y` meaning y ∈ f(x)
        #[arg(long)]
        edges: PathBuf,
        /// Degree bound for both f and f⁻¹
        #[arg(long = "N")]
        n: usize,
        /// Keep only the first n points
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Partition of a window of labels into separating classes for F
    PartitionIrr {
        #[arg(long)]
        ring: String,
        #[arg(long = "F", allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        window: Option<usize>,
    },
    /// g_F(s, ·) = 1_{s=v} on a window of a discrete group
    VerifyClassical {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long = "K", allow_hyphen_values = true)]
        k: String,
        #[arg(long = "F", allow_hyphen_values = true, default_value = "")]
        f: String,
        #[arg(long)]
        window: Option<usize>,
    },
    /// ‖(X_F − c_u ⊗ 1)(p_F ⊗ 1)‖ on a window
    VerifyQuantum {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long = "F", allow_hyphen_values = true, default_value = "all")]
        f: String,
        #[arg(long)]
        window: Option<usize>,
        /// `identity`, `random` or a JSON matrix file
        #[arg(long = "c", default_value = "identity")]
        c: String,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let common = cli.common;
    if common.tol.is_nan() || common.tol < f64::EPSILON {
        return Err(CliError::Input(format!("--tol must be at least {:e}", f64::EPSILON)));
    }
    let outcome = match cli.command {
        Command::FusionInfo { ring, window } => commands::fusion_info(&common, &ring, window)?,
        Command::Partition { edges, n, truncation } => commands::partition(&edges, n, truncation)?,
        Command::PartitionIrr { ring, f, window } => commands::partition_irr(&common, &ring, &f, window)?,
        Command::VerifyClassical { group, v, k, f, window } => {
            commands::verify_classical(&group, &v, &k, &f, window)?
        }
        Command::VerifyQuantum { ring, u, f, window, c } => {
            commands::verify_quantum(&common, &ring, &u, &f, window, &c)?
        }
    };
    let text = serde_json::to_string_pretty(&outcome.json).map_err(|e| CliError::Input(e.to_string()))? + "\n";
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if !common.quiet {
        eprint!("{}", outcome.summary);
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("FAILED");
            ExitCode::from(1)
        }
        Err(CliError::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
