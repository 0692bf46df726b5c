//! Exponents, thresholds and the type decomposition behind the upper bound
//! A_k(n) <= n^(beta_k + o(1)), turned into exact finite checks.
//!
//! A solution `(m_1, ..., m_k)` of `a/n` has type `j <= k - 2` when `m_j`
//! is the first denominator with `m_j >= n^gamma_j`, and type `k - 1` when
//! none of `m_1, ..., m_{k-2}` reaches its threshold. Thresholds are
//! `gamma_i = 2^(i-1) / 2^(k-2)`, so `gamma_{k-2} = 1/2` and each earlier
//! threshold halves the next.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{pow_compare, ExactExponent};
use crate::counting::a_k;
use crate::enumerate::{search_filtered, Outcome, PrefixFilter, Representation, SearchBudget};
use crate::error::{domain, Error, Result};

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `1 - 2 / (3^(k-2) + 1)`, the older exponent.
pub fn alpha(k: usize) -> Result<ExactExponent> {
    if k < 2 {
        return Err(domain("k", format!("alpha needs k >= 2, got {k}")));
    }
    let t = BigUint::from(3u32).pow((k - 2) as u32);
    ExactExponent::new(&t - 1u32, t + 1u32)
}

/// `1 - 1 / 2^(k-2)`.
pub fn beta(k: usize) -> Result<ExactExponent> {
    if k < 2 {
        return Err(domain("k", format!("beta needs k >= 2, got {k}")));
    }
    let t = pow2(k - 2);
    ExactExponent::new(&t - 1u32, t)
}

/// Threshold exponent `2^(i-1) / 2^(k-2)` for `1 <= i <= k - 2`.
pub fn gamma(i: usize, k: usize) -> Result<ExactExponent> {
    check_gamma_index(i, k)?;
    ExactExponent::new(pow2(i - 1), pow2(k - 2))
}

/// `2^(i-1) / 2^k`, a quarter of [`gamma`]. Kept only to show that this
/// scaling breaks the exponent identities.
pub fn gamma_quarter_scale(i: usize, k: usize) -> Result<ExactExponent> {
    check_gamma_index(i, k)?;
    ExactExponent::new(pow2(i - 1), pow2(k))
}

fn check_gamma_index(i: usize, k: usize) -> Result<()> {
    if k < 3 {
        return Err(domain("k", format!("thresholds need k >= 3, got {k}")));
    }
    if i < 1 || i > k - 2 {
        return Err(domain("i", format!("need 1 <= i <= {}, got {i}", k - 2)));
    }
    Ok(())
}

/// `1 - 1/2^ell`: the exponent that A_k(n) = n^o(1) would pass on to
/// A_(k+ell).
pub fn propagate_exponent(ell: usize) -> Result<ExactExponent> {
    if ell < 1 {
        return Err(domain("ell", "must be at least 1"));
    }
    let t = pow2(ell);
    ExactExponent::new(&t - 1u32, t)
}

/// `1 + gamma_1 + ... + gamma_(j-1) - gamma_j` under a given threshold
/// scaling; equals beta_k for every j when the scaling is right.
pub fn type_bound_exponent(
    j: usize,
    k: usize,
    gamma_fn: impl Fn(usize, usize) -> Result<ExactExponent>,
) -> Result<ExactExponent> {
    let head: ExactExponent = (1..j).map(|i| gamma_fn(i, k)).sum::<Result<_>>()?;
    (&ExactExponent::one() + &head).checked_sub(&gamma_fn(j, k)?)
}

/// `gamma_1 + ... + gamma_(k-2)`.
pub fn threshold_sum(
    k: usize,
    gamma_fn: impl Fn(usize, usize) -> Result<ExactExponent>,
) -> Result<ExactExponent> {
    (1..=k.saturating_sub(2)).map(|i| gamma_fn(i, k)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentRow {
    pub k: usize,
    pub alpha: ExactExponent,
    pub beta: ExactExponent,
    /// gamma_1 .. gamma_(k-2); empty for k = 2.
    pub gammas: Vec<ExactExponent>,
}

pub fn exponent_table(k_max: usize) -> Result<Vec<ExponentRow>> {
    if k_max < 2 {
        return Err(domain("k_max", format!("need k_max >= 2, got {k_max}")));
    }
    (2..=k_max)
        .map(|k| {
            Ok(ExponentRow {
                k,
                alpha: alpha(k)?,
                beta: beta(k)?,
                gammas: (1..=k - 2).map(|i| gamma(i, k)).collect::<Result<_>>()?,
            })
        })
        .collect()
}

/// The class `j` of a solution, `1 <= j <= k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeLabel {
    j: usize,
    k: usize,
}

impl TypeLabel {
    pub fn new(j: usize, k: usize) -> Result<Self> {
        if k < 3 {
            return Err(domain("k", format!("types need k >= 3, got {k}")));
        }
        if j < 1 || j > k - 1 {
            return Err(domain("j", format!("need 1 <= j <= {}, got {j}", k - 1)));
        }
        Ok(TypeLabel { j, k })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Type `k - 1`: all of `m_1 .. m_(k-2)` below threshold.
    pub fn is_binary(&self) -> bool {
        self.j == self.k - 1
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.j)
    }
}

/// `m >= n^gamma_i`, decided as `m^v >= n^u` with `gamma_i = u/v` in lowest terms.
pub fn meets_threshold(m: &BigUint, n: &BigUint, i: usize, k: usize) -> Result<bool> {
    let g = gamma(i, k)?;
    let to_u32 = |x: &BigUint| {
        x.to_u32()
            .ok_or_else(|| domain("k", format!("threshold exponent {x} too large")))
    };
    let (u, v) = (to_u32(g.numer())?, to_u32(g.denom())?);
    Ok(pow_compare(m, v, n, u) != Ordering::Less)
}

/// The smallest `j <= k - 2` with `m_j >= n^gamma_j`, or `k - 1` if none.
pub fn classify(rep: &Representation, n: u64, k: usize) -> Result<TypeLabel> {
    classify_denominators(rep.denominators(), n, k)
}

pub fn classify_denominators(ms: &[BigUint], n: u64, k: usize) -> Result<TypeLabel> {
    if k < 3 {
        return Err(domain("k", format!("classification needs k >= 3, got {k}")));
    }
    if ms.len() != k {
        return Err(domain("rep", format!("expected {k} terms, got {}", ms.len())));
    }
    let n = BigUint::from(n);
    for (j, m) in ms.iter().take(k - 2).enumerate() {
        if meets_threshold(m, &n, j + 1, k)? {
            return TypeLabel::new(j + 1, k);
        }
    }
    TypeLabel::new(k - 1, k)
}

/// The type shared by every solution starting with `prefix`, if the prefix
/// already decides it.
fn prefix_type(prefix: &[BigUint], n: &BigUint, k: usize) -> Result<Option<usize>> {
    for (j, m) in prefix.iter().take(k - 2).enumerate() {
        if meets_threshold(m, n, j + 1, k)? {
            return Ok(Some(j + 1));
        }
    }
    Ok((prefix.len() >= k - 2).then_some(k - 1))
}

/// Direct test of the type-`j` condition, independent of [`classify`].
pub fn has_type(ms: &[BigUint], n: u64, j: usize, k: usize) -> Result<bool> {
    TypeLabel::new(j, k)?;
    if ms.len() != k {
        return Err(domain("rep", format!("expected {k} terms, got {}", ms.len())));
    }
    let n = BigUint::from(n);
    let below = |i: usize| meets_threshold(&ms[i - 1], &n, i, k).map(|hit| !hit);
    for i in 1..j.min(k - 1) {
        if !below(i)? {
            return Ok(false);
        }
    }
    if j == k - 1 {
        return Ok(true);
    }
    meets_threshold(&ms[j - 1], &n, j, k)
}

/// Which `a` admit a solution of each type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeCensus {
    pub k: usize,
    pub n: u64,
    /// For each type `j`, `members[&j][a - 1]` says whether some
    /// representation of `a/n` has type `j`.
    pub members: BTreeMap<usize, Vec<bool>>,
    pub nodes: u64,
    /// Values of `a` whose search ran out of budget with types still unseen.
    pub undecided: Vec<u64>,
}

impl TypeCensus {
    pub fn counts(&self) -> BTreeMap<usize, u64> {
        self.members
            .iter()
            .map(|(&j, set)| (j, set.iter().filter(|&&b| b).count() as u64))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Which types occur among the k-term solutions of `a/n`, the search nodes
/// spent, and whether the budget ran out before every type was decided.
pub fn type_witnesses(a: u64, n: u64, k: usize, budget: SearchBudget) -> Result<(Vec<bool>, u64, bool)> {
    if k < 3 {
        return Err(domain("k", format!("type counts need k >= 3, got {k}")));
    }
    let big_n = BigUint::from(n);
    let seen = vec![Cell::new(false); k - 1];
    let missing = Cell::new(k - 1);
    let failure = Cell::new(None);
    // A prefix of k - 2 terms fixes the type, often sooner; once that
    // type has a witness nothing below the prefix can add to the census.
    let mut admit = |prefix: &[BigUint]| match prefix_type(prefix, &big_n, k) {
        Ok(Some(j)) => !seen[j - 1].get(),
        Ok(None) => true,
        Err(e) => {
            failure.set(Some(e));
            false
        }
    };
    let mut filter = PrefixFilter { max_len: k - 2, admit: &mut admit };
    let (outcome, stats) = search_filtered(a, n, k, budget, &mut filter, |ms| {
        match classify_denominators(ms, n, k) {
            Ok(label) => {
                let slot = &seen[label.j() - 1];
                if !slot.replace(true) {
                    missing.set(missing.get() - 1);
                }
                if missing.get() == 0 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            }
            Err(e) => {
                failure.set(Some(e));
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let undecided = outcome == Outcome::BudgetExhausted;
    Ok((seen.into_iter().map(Cell::into_inner).collect(), stats.nodes, undecided))
}

/// For each type `j`, the number of `a <= n` with some solution of type `j`.
///
/// Each `a` is searched until every type has a witness or the search ends.
pub fn type_counts(n: u64, k: usize, budget: SearchBudget) -> Result<TypeCensus> {
    if k < 3 {
        return Err(domain("k", format!("type counts need k >= 3, got {k}")));
    }
    if n == 0 {
        return Err(domain("n", "must be positive"));
    }
    let per_a: Vec<(Vec<bool>, u64, bool)> = (1..=n)
        .into_par_iter()
        .map(|a| type_witnesses(a, n, k, budget))
        .collect::<Result<_>>()?;
    let members = (1..k)
        .map(|j| (j, per_a.iter().map(|(seen, _, _)| seen[j - 1]).collect()))
        .collect();
    Ok(TypeCensus {
        k,
        n,
        members,
        nodes: per_a.iter().map(|(_, nodes, _)| nodes).sum(),
        undecided: per_a
            .iter()
            .zip(1..)
            .filter(|((_, _, u), _)| *u)
            .map(|(_, a)| a)
            .collect(),
    })
}

/// `count <= k * n^beta_k`, checked as
/// `count^(2^(k-2)) <= k^(2^(k-2)) * n^(2^(k-2) - 1)`.
pub fn within_type_bound(count: u64, n: u64, k: usize) -> Result<bool> {
    if k < 3 {
        return Err(domain("k", format!("type bounds need k >= 3, got {k}")));
    }
    let e = 1u32
        .checked_shl((k - 2) as u32)
        .ok_or_else(|| domain("k", format!("{k} too large")))?;
    let lhs = BigUint::from(count).pow(e);
    let rhs = BigUint::from(k).pow(e) * BigUint::from(n).pow(e - 1);
    Ok(lhs <= rhs)
}

/// Rewrites `a/n - 1/m_1 - ... - 1/m_r` as `a' / N'` with
/// `N' = n * m_1 * ... * m_r`.
///
/// Returns `(a', N')`; fails if the remainder is negative.
pub fn binary_reduce(prefix: &[BigUint], a: u64, n: u64) -> Result<(BigUint, BigUint)> {
    if n == 0 || prefix.iter().any(Zero::is_zero) {
        return Err(Error::ZeroDenominator);
    }
    let product: BigUint = prefix.iter().product();
    let big_n = &product * n;
    // a' = a P - sum_i n P / m_i; each n P / m_i is an integer.
    let subtracted: BigUint = prefix.iter().map(|m| &big_n / m).sum();
    let a_prime = BigInt::from(&product * a) - BigInt::from(subtracted);
    match a_prime.sign() {
        Sign::Minus => Err(Error::Underflow {
            minuend: format!("{a}/{n}"),
            subtrahend: format!("reciprocals of {prefix:?}"),
        }),
        _ => Ok((a_prime.to_biguint().expect("nonnegative"), big_n)),
    }
}

/// `log A_k(n) / log n`, as a report value. Fails on an incomplete count.
pub fn empirical_exponent(k: usize, n: u64, budget: SearchBudget) -> Result<f64> {
    if n < 2 {
        return Err(domain("n", "log ratio needs n >= 2"));
    }
    let record = a_k(n, k, budget)?;
    if !record.is_complete() {
        return Err(Error::BudgetExhausted { undecided: record.undecided.len() as u64 });
    }
    Ok(log_ratio(&BigUint::from(record.a_k_n), n))
}

/// `ln(value) / ln(base)` for report columns; `base >= 2`.
pub fn log_ratio(value: &BigUint, base: u64) -> f64 {
    let bits = value.bits();
    // Keep the top 64 bits so huge sums still convert.
    let ln_value = if bits > 64 {
        let shift = bits - 64;
        (value >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    } else {
        value.to_f64().unwrap().ln()
    };
    ln_value / (base as f64).ln()
}
