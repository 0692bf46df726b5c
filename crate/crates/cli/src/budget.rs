//! Default search budgets for command-line runs.

use efrac::SearchBudget;

/// Per-search node cap applied outside the desk-scale ranges.
pub const DEFAULT_MAX_NODES: u64 = 100_000_000;

/// Ranges of (n, k) that finish in seconds without any cap.
pub fn desk_scale(n: u64, k: usize) -> bool {
    match k {
        0..=2 => n <= 100_000,
        3 => n <= 2_000,
        4 => n <= 100,
        _ => n <= 12,
    }
}

/// `--max-nodes 0` lifts every cap; no flag means unlimited at desk scale
/// and [`DEFAULT_MAX_NODES`] beyond it.
pub fn resolve(max_nodes: Option<u64>, n: u64, k: usize) -> SearchBudget {
    match max_nodes {
        Some(0) => SearchBudget::UNLIMITED,
        Some(cap) => SearchBudget::nodes(cap),
        None if desk_scale(n, k) => SearchBudget::UNLIMITED,
        None => SearchBudget::nodes(DEFAULT_MAX_NODES),
    }
}
