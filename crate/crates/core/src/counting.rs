//! Exact values of A_k(n), the number of `1 <= a <= n` for which `a/n`
//! has a k-term representation, with divisor and two-term fast paths.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arith::Fraction;
use crate::enumerate::{denominator_bounds, exists, Existence, SearchBudget};
use crate::error::{domain, Result};
use crate::instrument::type_counts;

/// One evaluation of A_k(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub k: usize,
    pub n: u64,
    pub a_k_n: u64,
    /// Number of `a` admitting a solution of each type. Empty unless the
    /// record came from [`a_k_with_types`].
    pub per_type: BTreeMap<usize, u64>,
    /// `members[a - 1]` is true when `a/n` is representable.
    pub members: Vec<bool>,
    /// Per-type membership, indexed like `members`, keyed like `per_type`.
    pub type_members: BTreeMap<usize, Vec<bool>>,
    pub nodes: u64,
    pub elapsed: Duration,
    /// Values of `a` whose test ran out of budget before deciding.
    pub undecided: Vec<u64>,
}

impl CountRecord {
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }

    /// Size of the union of the per-type membership sets.
    pub fn type_union_size(&self) -> u64 {
        (0..self.members.len())
            .filter(|&i| self.type_members.values().any(|set| set[i]))
            .count() as u64
    }
}

fn check_nk(n: u64, k: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("n", "must be positive"));
    }
    if k == 0 {
        return Err(domain("k", "must be positive"));
    }
    Ok(())
}

/// A_k(n) by a short-circuiting existence test for each `a`.
///
/// Tests for different `a` run in parallel; the record does not depend on
/// scheduling.
pub fn a_k(n: u64, k: usize, budget: SearchBudget) -> Result<CountRecord> {
    check_nk(n, k)?;
    let start = Instant::now();
    let answers: Vec<(Existence, u64)> = (1..=n)
        .into_par_iter()
        .map(|a| exists(a, n, k, budget).map(|(ans, stats)| (ans, stats.nodes)))
        .collect::<Result<_>>()?;
    let members: Vec<bool> = answers.iter().map(|(ans, _)| *ans == Existence::Yes).collect();
    let undecided = answers
        .iter()
        .zip(1..)
        .filter(|((ans, _), _)| *ans == Existence::Unknown)
        .map(|(_, a)| a)
        .collect();
    Ok(CountRecord {
        k,
        n,
        a_k_n: members.iter().filter(|&&m| m).count() as u64,
        per_type: BTreeMap::new(),
        members,
        type_members: BTreeMap::new(),
        nodes: answers.iter().map(|(_, nodes)| nodes).sum(),
        elapsed: start.elapsed(),
        undecided,
    })
}

/// A_k(n) together with the per-type breakdown. Requires `k >= 3`.
pub fn a_k_with_types(n: u64, k: usize, budget: SearchBudget) -> Result<CountRecord> {
    check_nk(n, k)?;
    let start = Instant::now();
    let census = type_counts(n, k, budget)?;
    let members: Vec<bool> = (0..n as usize)
        .map(|i| census.members.values().any(|set| set[i]))
        .collect();
    Ok(CountRecord {
        k,
        n,
        a_k_n: members.iter().filter(|&&m| m).count() as u64,
        per_type: census.counts(),
        members,
        type_members: census.members,
        nodes: census.nodes,
        elapsed: start.elapsed(),
        undecided: census.undecided,
    })
}

/// A_1(n) = d(n), the number of divisors of `n`, by trial division.
pub fn a_1_fast(n: u64) -> u64 {
    assert!(n >= 1, "a_1_fast needs n >= 1");
    let mut d = 0;
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            d += if i * i == n { 1 } else { 2 };
        }
        i += 1;
    }
    d
}

/// A_2(n) by scanning the first denominator and testing whether the
/// remainder is a unit fraction.
pub fn a_2_fast(n: u64) -> u64 {
    assert!(n >= 1, "a_2_fast needs n >= 1");
    (1..=n).filter(|&a| two_term(a, n)).count() as u64
}

fn two_term(a: u64, n: u64) -> bool {
    let target = Fraction::new(a, n).expect("n >= 1");
    let range = denominator_bounds(&target, 2, &BigUint::from(1u32)).expect("target is positive");
    if range.is_empty() {
        return false;
    }
    let p = target.numer().to_u128().expect("p <= n");
    let q = target.denom().to_u128().expect("q <= n");
    let (lo, hi) = (range.lo.to_u128().unwrap(), range.hi.to_u128().unwrap());
    // p/q - 1/m = (p*m - q) / (q*m) must be 1/m' for some integer m'.
    (lo..=hi).any(|m| (q * m).is_multiple_of(p * m - q))
}

/// Sum of A_k(n) over `1 <= n <= x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSum {
    pub k: usize,
    pub x: u64,
    pub sum: BigUint,
    /// Values of `n` whose summand is only a lower bound.
    pub incomplete: Vec<u64>,
}

/// Σ_{n ≤ x} A_k(n), with the divisor and two-term fast paths for k = 1, 2.
pub fn partial_sum(k: usize, x: u64, budget: SearchBudget) -> Result<PartialSum> {
    check_nk(x, k)?;
    let terms: Vec<(u64, bool)> = (1..=x)
        .into_par_iter()
        .map(|n| match k {
            1 => Ok((a_1_fast(n), true)),
            2 => Ok((a_2_fast(n), true)),
            _ => a_k(n, k, budget).map(|r| (r.a_k_n, r.is_complete())),
        })
        .collect::<Result<_>>()?;
    Ok(PartialSum {
        k,
        x,
        sum: terms.iter().map(|&(v, _)| BigUint::from(v)).sum(),
        incomplete: terms
            .iter()
            .zip(1..)
            .filter(|((_, done), _)| !done)
            .map(|(_, n)| n)
            .collect(),
    })
}
