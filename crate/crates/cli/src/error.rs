use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const NO_SOLUTION: i32 = 3;
    pub const BUDGET: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: corrupt cache: {reason}")]
    CorruptCache { path: PathBuf, line: usize, reason: String },
    #[error("{path}: cache schema version {found}, expected {expected}")]
    CacheVersion { path: PathBuf, found: String, expected: u32 },
    #[error("cache holds A={cached} for k={k}, n={n} but recomputation gave {computed}")]
    CacheConflict { k: usize, n: u64, cached: u64, computed: u64 },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Budget(_) => exit::BUDGET,
            CliError::Io { .. }
            | CliError::CorruptCache { .. }
            | CliError::CacheVersion { .. }
            | CliError::CacheConflict { .. }
            | CliError::Output(_) => exit::IO,
        }
    }
}

impl From<efrac::Error> for CliError {
    fn from(e: efrac::Error) -> Self {
        match e {
            efrac::Error::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
