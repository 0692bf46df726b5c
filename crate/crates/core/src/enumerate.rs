//! Depth-first enumeration of k-term unit fraction representations.
//!
//! A representation of `a/n` is a non-decreasing tuple `m_1 <= ... <= m_k`
//! with `1/m_1 + ... + 1/m_k = a/n`. Each level picks the next denominator
//! from [`denominator_bounds`] and passes the exact remainder down. The
//! search runs on `u128` words and restarts on big integers if any
//! intermediate product overflows.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Fraction;
use crate::error::{domain, Error, Result};

/// Caps on a single search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_solutions: Option<u64>,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget { max_nodes: None, max_solutions: None };

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes: Some(max_nodes), max_solutions: None }
    }

    pub fn is_unlimited(&self) -> bool {
        self.max_nodes.is_none() && self.max_solutions.is_none()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate denominators tried, over all levels.
    pub nodes: u64,
    pub solutions: u64,
}

/// A verified representation of `target` as a sum of unit fractions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    denominators: Vec<BigUint>,
    target: Fraction,
}

impl Representation {
    /// Checks ordering and the exact sum before accepting the tuple.
    pub fn new(denominators: Vec<BigUint>, target: Fraction) -> Result<Self> {
        if denominators.is_empty() {
            return Err(Error::InvalidRepresentation("no terms".into()));
        }
        if denominators.iter().any(Zero::is_zero) {
            return Err(Error::InvalidRepresentation("zero denominator".into()));
        }
        if denominators.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidRepresentation(format!(
                "{} is not non-decreasing",
                fmt_tuple(&denominators)
            )));
        }
        let sum = reciprocal_sum(&denominators);
        if sum != target {
            return Err(Error::InvalidRepresentation(format!(
                "{} sums to {sum}, not {target}",
                fmt_tuple(&denominators)
            )));
        }
        Ok(Representation { denominators, target })
    }

    pub fn denominators(&self) -> &[BigUint] {
        &self.denominators
    }

    pub fn target(&self) -> &Fraction {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.denominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denominators.is_empty()
    }
}

/// `1/m_1 + ... + 1/m_k`, exactly.
pub fn reciprocal_sum(denominators: &[BigUint]) -> Fraction {
    let den = denominators.iter().fold(BigUint::one(), |acc, m| acc.lcm(m));
    let num = denominators.iter().map(|m| &den / m).sum::<BigUint>();
    Fraction::new(num, den).expect("lcm of positive integers is positive")
}

fn fmt_tuple(ms: &[BigUint]) -> String {
    let parts: Vec<String> = ms.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Inclusive range of admissible denominators; empty when `lo > hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenomRange {
    pub lo: BigUint,
    pub hi: BigUint,
}

impl DenomRange {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    fn empty() -> Self {
        DenomRange { lo: BigUint::one(), hi: BigUint::zero() }
    }
}

/// Denominators `m >= min_denom` that can start a `terms_left`-term
/// representation of `remaining`.
///
/// With `remaining = p/q`, the range is `max(min_denom, floor(q/p) + 1) ..=
/// floor(terms_left * q / p)`: the next reciprocal must be strictly smaller
/// than the remainder (the other terms are positive) but no smaller than
/// its average share. With one term left the only candidate is `q/p`.
pub fn denominator_bounds(
    remaining: &Fraction,
    terms_left: usize,
    min_denom: &BigUint,
) -> Result<DenomRange> {
    if terms_left == 0 {
        return Err(domain("terms_left", "must be at least 1"));
    }
    if remaining.is_zero() {
        return Err(Error::ExhaustedTarget);
    }
    let (p, q) = (remaining.numer(), remaining.denom());
    if terms_left == 1 {
        return Ok(if One::is_one(p) && q >= min_denom {
            DenomRange { lo: q.clone(), hi: q.clone() }
        } else {
            DenomRange::empty()
        });
    }
    let lo = (q / p + 1u32).max(min_denom.clone());
    let hi = q * BigUint::from(terms_left) / p;
    Ok(if lo > hi { DenomRange::empty() } else { DenomRange { lo, hi } })
}

/// Integer type the search runs on.
trait Word: Clone + Ord + Sized {
    fn from_u64(v: u64) -> Option<Self>;
    fn to_big(&self) -> BigUint;
    fn is_one(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Option<Self>;
    fn add_one(&self) -> Option<Self>;
    /// Caller guarantees `self >= rhs`.
    fn sub(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn gcd(&self, rhs: &Self) -> Self;
}

macro_rules! machine_word {
    ($t:ty) => {
        impl Word for $t {
            fn from_u64(v: u64) -> Option<Self> {
                <$t>::try_from(v).ok()
            }
            fn to_big(&self) -> BigUint {
                BigUint::from(*self)
            }
            fn is_one(&self) -> bool {
                *self == 1
            }
            fn mul(&self, rhs: &Self) -> Option<Self> {
                self.checked_mul(*rhs)
            }
            fn add_one(&self) -> Option<Self> {
                self.checked_add(1)
            }
            fn sub(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn div(&self, rhs: &Self) -> Self {
                self / rhs
            }
            fn gcd(&self, rhs: &Self) -> Self {
                Integer::gcd(self, rhs)
            }
        }
    };
}

machine_word!(u128);
#[cfg(test)]
machine_word!(u32);

impl Word for BigUint {
    fn from_u64(v: u64) -> Option<Self> {
        Some(BigUint::from(v))
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn add_one(&self) -> Option<Self> {
        Some(self + 1u32)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
}

enum Halt {
    Visitor,
    Budget,
    Overflow,
}

struct Search<'v, W, V> {
    budget: SearchBudget,
    stats: SearchStats,
    /// Solutions already delivered by an earlier, overflowed pass.
    skip: u64,
    delivered: u64,
    prefix: Vec<W>,
    filter_len: usize,
    admit: Option<&'v mut Admit<'v>>,
    visit: &'v mut V,
}

type Admit<'a> = dyn FnMut(&[BigUint]) -> bool + 'a;

/// Lets a caller skip whole subtrees. `admit` sees every prefix of at most
/// `max_len` denominators; returning false drops all of its extensions.
pub struct PrefixFilter<'f> {
    pub max_len: usize,
    pub admit: &'f mut dyn FnMut(&[BigUint]) -> bool,
}

impl<W: Word, V> Search<'_, W, V> {
    fn admits(&mut self) -> bool {
        match &mut self.admit {
            Some(admit) if self.prefix.len() <= self.filter_len => {
                let big: Vec<BigUint> = self.prefix.iter().map(Word::to_big).collect();
                admit(&big)
            }
            _ => true,
        }
    }
}

impl<W, V> Search<'_, W, V>
where
    W: Word,
    V: FnMut(&[BigUint]) -> ControlFlow<()>,
{
    fn emit(&mut self, last: &W) -> Result<(), Halt> {
        if let Some(cap) = self.budget.max_solutions {
            if self.stats.solutions >= cap {
                return Err(Halt::Budget);
            }
        }
        self.stats.solutions += 1;
        if self.stats.solutions <= self.skip {
            return Ok(());
        }
        let tuple: Vec<BigUint> =
            self.prefix.iter().chain(std::iter::once(last)).map(Word::to_big).collect();
        self.delivered += 1;
        match (self.visit)(&tuple) {
            ControlFlow::Continue(()) => Ok(()),
            ControlFlow::Break(()) => Err(Halt::Visitor),
        }
    }

    fn tick(&mut self) -> Result<(), Halt> {
        if let Some(cap) = self.budget.max_nodes {
            if self.stats.nodes >= cap {
                return Err(Halt::Budget);
            }
        }
        self.stats.nodes += 1;
        Ok(())
    }

    /// Extends `prefix` by every admissible tail for `p/q` (in lowest terms).
    fn dfs(&mut self, p: &W, q: &W, terms_left: usize, min: &W) -> Result<(), Halt> {
        if terms_left == 1 {
            if p.is_one() && q >= min {
                self.emit(q)?;
            }
            return Ok(());
        }
        let floor = q.div(p).add_one().ok_or(Halt::Overflow)?;
        let mut m = if &floor > min { floor } else { min.clone() };
        let t = W::from_u64(terms_left as u64).ok_or(Halt::Overflow)?;
        let hi = q.mul(&t).ok_or(Halt::Overflow)?.div(p);
        while m <= hi {
            self.tick()?;
            // p/q - 1/m = (p*m - q) / (q*m), positive because m > q/p.
            let num = p.mul(&m).ok_or(Halt::Overflow)?.sub(q);
            let den = q.mul(&m).ok_or(Halt::Overflow)?;
            let g = num.gcd(&den);
            let (num, den) = (num.div(&g), den.div(&g));
            let before = self.stats.solutions;
            self.prefix.push(m.clone());
            let res = if self.admits() { self.dfs(&num, &den, terms_left - 1, &m) } else { Ok(()) };
            self.prefix.pop();
            res?;
            // A new solution may have changed the filter's mind about this prefix.
            if self.stats.solutions != before && !self.admits() {
                return Ok(());
            }
            m = m.add_one().ok_or(Halt::Overflow)?;
        }
        Ok(())
    }
}

/// Why a search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Every representation was visited.
    Complete,
    /// The visitor asked to stop.
    Stopped,
    /// A node or solution cap was hit first.
    BudgetExhausted,
}

fn check_args(a: u64, n: u64, k: usize) -> Result<()> {
    if a == 0 {
        return Err(domain("a", "must be positive"));
    }
    if n == 0 {
        return Err(domain("n", "must be positive"));
    }
    if k == 0 {
        return Err(domain("k", "must be positive"));
    }
    Ok(())
}

fn run<W: Word, V>(
    p: &W,
    q: &W,
    k: usize,
    budget: SearchBudget,
    skip: u64,
    filter: Option<&mut PrefixFilter<'_>>,
    visit: &mut V,
) -> (Result<(), Halt>, SearchStats, u64)
where
    V: FnMut(&[BigUint]) -> ControlFlow<()>,
{
    let mut search = Search {
        budget,
        stats: SearchStats::default(),
        skip,
        delivered: 0,
        prefix: Vec::with_capacity(k),
        filter_len: filter.as_ref().map_or(0, |f| f.max_len),
        admit: filter.map(|f| &mut *f.admit as &mut Admit<'_>),
        visit,
    };
    let res = match W::from_u64(1) {
        Some(one) => search.dfs(p, q, k, &one),
        None => Err(Halt::Overflow),
    };
    (res, search.stats, search.delivered)
}

/// Visits every k-term representation of `a/n` in lexicographic order.
///
/// The visitor sees the denominator tuple and may stop the search early.
pub fn search<V>(a: u64, n: u64, k: usize, budget: SearchBudget, visit: V) -> Result<(Outcome, SearchStats)>
where
    V: FnMut(&[BigUint]) -> ControlFlow<()>,
{
    search_on::<u128, V>(a, n, k, budget, None, visit)
}

/// [`search`] that consults `filter` before descending below a prefix.
///
/// The filter may depend on what the visitor has seen, so after a machine
/// word overflow the big-integer pass starts over without skipping: the
/// visitor can then see a tuple twice.
pub fn search_filtered<V>(
    a: u64,
    n: u64,
    k: usize,
    budget: SearchBudget,
    filter: &mut PrefixFilter<'_>,
    visit: V,
) -> Result<(Outcome, SearchStats)>
where
    V: FnMut(&[BigUint]) -> ControlFlow<()>,
{
    search_on::<u128, V>(a, n, k, budget, Some(filter), visit)
}

fn search_on<W: Word, V>(
    a: u64,
    n: u64,
    k: usize,
    budget: SearchBudget,
    mut filter: Option<&mut PrefixFilter<'_>>,
    mut visit: V,
) -> Result<(Outcome, SearchStats)>
where
    V: FnMut(&[BigUint]) -> ControlFlow<()>,
{
    check_args(a, n, k)?;
    let g = Integer::gcd(&a, &n);
    let (p, q) = (a / g, n / g);
    let (mut res, mut stats, mut delivered) = match (W::from_u64(p), W::from_u64(q)) {
        (Some(wp), Some(wq)) => run(&wp, &wq, k, budget, 0, filter.as_deref_mut(), &mut visit),
        _ => (Err(Halt::Overflow), SearchStats::default(), 0),
    };
    if matches!(res, Err(Halt::Overflow)) {
        let skipped = if filter.is_some() { 0 } else { delivered };
        (res, stats, delivered) =
            run(&BigUint::from(p), &BigUint::from(q), k, budget, skipped, filter, &mut visit);
        delivered += skipped;
    }
    debug_assert!(delivered <= stats.solutions);
    let outcome = match res {
        Ok(()) => Outcome::Complete,
        Err(Halt::Visitor) => Outcome::Stopped,
        Err(Halt::Budget) => Outcome::BudgetExhausted,
        Err(Halt::Overflow) => unreachable!("big-integer search cannot overflow"),
    };
    Ok((outcome, stats))
}

/// All representations found by [`enumerate`].
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub representations: Vec<Representation>,
    pub stats: SearchStats,
    /// False when the budget ran out; the list is then a prefix of the full answer.
    pub complete: bool,
}

/// Every k-term representation of `a/n`, lexicographically ordered.
pub fn enumerate(a: u64, n: u64, k: usize, budget: SearchBudget) -> Result<Enumeration> {
    let target = Fraction::new(a, n)?;
    let mut reps = Vec::new();
    let mut invalid = None;
    let (outcome, stats) = search(a, n, k, budget, |ms| {
        match Representation::new(ms.to_vec(), target.clone()) {
            Ok(rep) => {
                reps.push(rep);
                ControlFlow::Continue(())
            }
            Err(e) => {
                invalid = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = invalid {
        return Err(e);
    }
    Ok(Enumeration {
        representations: reps,
        stats,
        complete: outcome == Outcome::Complete,
    })
}

/// Answer of a decision query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Existence {
    Yes,
    No,
    /// The budget ran out before a witness was found.
    Unknown,
}

/// Whether `a/n` has any k-term representation. Stops at the first witness.
pub fn exists(a: u64, n: u64, k: usize, budget: SearchBudget) -> Result<(Existence, SearchStats)> {
    let (outcome, stats) = search(a, n, k, budget, |_| ControlFlow::Break(()))?;
    let answer = match outcome {
        Outcome::Stopped => Existence::Yes,
        Outcome::Complete => Existence::No,
        Outcome::BudgetExhausted => Existence::Unknown,
    };
    Ok((answer, stats))
}

/// Number of k-term representations of `a/n`, without materializing them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count {
    pub count: u64,
    pub stats: SearchStats,
    pub complete: bool,
}

pub fn count(a: u64, n: u64, k: usize, budget: SearchBudget) -> Result<Count> {
    let target = Fraction::new(a, n)?;
    let mut total = 0u64;
    let mut bad = false;
    let (outcome, stats) = search(a, n, k, budget, |ms| {
        if reciprocal_sum(ms) != target {
            bad = true;
            return ControlFlow::Break(());
        }
        total += 1;
        ControlFlow::Continue(())
    })?;
    if bad {
        return Err(Error::InvalidRepresentation(format!("search emitted a tuple not summing to {target}")));
    }
    Ok(Count { count: total, stats, complete: outcome == Outcome::Complete })
}
