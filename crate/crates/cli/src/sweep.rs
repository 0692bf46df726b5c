//! A_k(n) over a range of n, computed in parallel, merged in order and
//! written as CSV. Results are reused from and added to an optional cache.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use efrac::instrument::log_ratio;
use efrac::{a_k, SearchBudget};
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::budget;
use crate::cache::{write_atomically, Cache, CacheEntry};
use crate::error::CliError;

pub const CSV_HEADER: &str = "k,n,A,logA_over_logn,elapsed_ms";

#[derive(Debug, Clone)]
pub struct SweepJob {
    pub k: usize,
    pub n_min: u64,
    pub n_max: u64,
    pub jobs: usize,
    pub cache_path: Option<PathBuf>,
    pub out_path: PathBuf,
    pub max_nodes: Option<u64>,
}

impl SweepJob {
    fn validate(&self) -> Result<(), CliError> {
        if self.k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(CliError::Usage(format!(
                "need 1 <= --n-min <= --n-max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub k: usize,
    pub n: u64,
    pub a: u64,
    pub elapsed_us: u64,
}

impl SweepRow {
    /// `log A / log n` with six decimals; empty for n = 1.
    pub fn log_column(&self) -> String {
        if self.n < 2 {
            String::new()
        } else {
            format!("{:.6}", log_ratio(&BigUint::from(self.a), self.n))
        }
    }

    pub fn elapsed_ms(&self) -> String {
        format!("{}.{:03}", self.elapsed_us / 1000, self.elapsed_us % 1000)
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub computed: usize,
    pub reused: usize,
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.k, r.n, r.a, r.log_column(), r.elapsed_ms()).unwrap();
    }
    out
}

/// Runs a sweep and writes its CSV. Nothing is written if any value fails
/// or runs out of budget.
pub fn run_sweep(job: &SweepJob) -> Result<SweepReport, CliError> {
    job.validate()?;
    let mut cache = match &job.cache_path {
        Some(path) => Cache::load(path)?,
        None => Cache::default(),
    };
    let missing: Vec<u64> = (job.n_min..=job.n_max)
        .filter(|&n| cache.get(job.k, n).is_none())
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", job.jobs)))?;
    let fresh: Vec<CacheEntry> = pool.install(|| {
        missing
            .par_iter()
            .map(|&n| compute(job.k, n, budget::resolve(job.max_nodes, n, job.k)))
            .collect::<Result<_, _>>()
    })?;

    let computed = fresh.len();
    for entry in fresh {
        cache.insert(entry)?;
    }
    let rows: Vec<SweepRow> = (job.n_min..=job.n_max)
        .map(|n| {
            let e = cache.get(job.k, n).expect("every n is cached or computed");
            SweepRow { k: e.k, n: e.n, a: e.a, elapsed_us: e.elapsed_us }
        })
        .collect();

    write_atomically(&job.out_path, render_csv(&rows).as_bytes())?;
    if let Some(path) = &job.cache_path {
        if computed > 0 {
            cache.save(path)?;
        }
    }
    Ok(SweepReport { reused: rows.len() - computed, rows, computed })
}

fn compute(k: usize, n: u64, budget: SearchBudget) -> Result<CacheEntry, CliError> {
    let start = Instant::now();
    let record = a_k(n, k, budget)?;
    if !record.is_complete() {
        return Err(CliError::Budget(format!(
            "k={k}, n={n}: {} membership tests undecided",
            record.undecided.len()
        )));
    }
    Ok(CacheEntry {
        k,
        n,
        a: record.a_k_n,
        per_type: None,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}
