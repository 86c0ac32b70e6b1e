//! `holte`: exact spectral and enumerative computations for carry chains.
//!
//! Subcommands mirror the library modules: `spectrum`, `eigensystem`, and
//! `matrix` report the carry matrix and its eigenvector system; `cascade`
//! emits avoidance counts; `threshold` decides the closed-form regime;
//! `moduli` emits the achievable `(N, d)` grid; `classify` compares two
//! systems; `verify` runs the whole identity suite over a grid.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 budget exceeded.

#![allow(clippy::needless_range_loop)]

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Budget(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Budget(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
    Bfile,
}

#[derive(Parser)]
#[command(
    name = "holte",
    version,
    about = "Exact spectral data, cascade-free counts, and classification for carry chains",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Stationary distribution, Eulerian row, and eigenvalues of a carry chain
    Spectrum {
        /// Number of summands (k >= 2)
        #[arg(long)]
        k: usize,
        /// Digit base (N >= 2)
        #[arg(long)]
        base: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Biorthogonal eigenvector table (scaled left vectors, right vectors, quotients)
    Eigensystem {
        /// Number of summands (k >= 2)
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer transition-count matrix of a carry chain
    Matrix {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        base: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cascade-free counts a(0..len) for a restriction or a binary chain
    Cascade {
        /// Number of summands; requires --forbid
        #[arg(long)]
        k: Option<usize>,
        /// Digit base
        #[arg(long)]
        base: u32,
        /// Forbidden carry states, comma separated (e.g. 3 or 2,3)
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<usize>,
        /// Binary chain digit classes g,t,r (generate, propagate, kill)
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["k", "forbid"])]
        chain: Option<Vec<u32>>,
        /// Largest sequence length
        #[arg(long)]
        len: u32,
        /// Cross-check against the brute-force oracle (budget-capped)
        #[arg(long)]
        oracle: bool,
        /// Enumeration budget for the oracle
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form threshold verdict with certificates
    Threshold {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        base: u32,
        /// Forbidden carry states, comma separated
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Achievability grid of (N, det) pairs for binary chains
    Moduli {
        /// Largest alphabet size N
        #[arg(long)]
        nmax: u32,
        /// Largest determinant d
        #[arg(long)]
        dmax: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two carry systems (JSON matrices) by characteristic polynomial
    Classify {
        /// First matrix file
        a: PathBuf,
        /// Second matrix file
        b: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full identity suite over a (k, base) grid
    Verify {
        /// Largest summand count in the grid
        #[arg(long = "grid-kmax", default_value_t = 5)]
        grid_kmax: usize,
        /// Bases in the grid, comma separated
        #[arg(long = "grid-bases", value_delimiter = ',', default_values_t = [2u32, 3])]
        grid_bases: Vec<u32>,
        /// Enumeration budget for brute-force checks
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        /// Deliberately corrupt one check to exercise failure reporting
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
