//! Command-line front end for the `efrac` engine.
//!
//! Exit codes: 0 success, 2 usage, 3 no solution, 4 budget exhausted,
//! 5 I/O or cache failure.

pub mod budget;
pub mod cache;
pub mod commands;
pub mod error;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{CountArgs, SolveArgs};
use crate::error::{exit, CliError};
use crate::sweep::{run_sweep, SweepJob};

#[derive(Debug, Parser)]
#[command(name = "efrac", version, about = "Exact k-term Egyptian fraction search and counting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every k-term representation of a/n as JSON lines.
    Solve {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Stop after this many representations.
        #[arg(long)]
        limit: Option<u64>,
        /// Node cap per search; 0 lifts all caps.
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Compute A_k(n).
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Also count representable a by solution type (k >= 3).
        #[arg(long)]
        per_type: bool,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Write A_k(n) for a range of n as CSV, reusing a result cache.
    Sweep {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
        /// Worker threads [default: available parallelism].
        #[arg(long, env = "EFRAC_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Print the exact exponent table for 2 <= k <= k_max.
    Bounds {
        #[arg(long)]
        k_max: usize,
    },
    /// Print log A_k(n) / log n for a list of n as CSV.
    Exponents {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        n: Vec<u64>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Sum A_k(n) over n <= x.
    Sum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Solve { a, n, k, limit, max_nodes } => {
            commands::solve(&SolveArgs { a, n, k, limit, max_nodes }, out)
        }
        Command::Count { n, k, per_type, max_nodes } => {
            commands::count(&CountArgs { n, k, per_type, max_nodes }, out)
        }
        Command::Sweep { k, n_min, n_max, jobs, cache, out: out_path, max_nodes } => {
            let job = SweepJob {
                k,
                n_min,
                n_max,
                jobs: jobs.unwrap_or_else(default_jobs),
                cache_path: cache,
                out_path,
                max_nodes,
            };
            run_sweep(&job).map(|_| exit::OK)
        }
        Command::Bounds { k_max } => commands::bounds(k_max, out),
        Command::Exponents { k, n, max_nodes } => commands::exponents(k, &n, max_nodes, out),
        Command::Sum { k, x, max_nodes } => commands::sum(k, x, max_nodes, out),
    }
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "efrac: {e}");
            e.exit_code()
        }
    }
}
