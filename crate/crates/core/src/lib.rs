//! Exact enumeration and counting of k-term Egyptian fraction
//! representations `a/n = 1/m_1 + ... + 1/m_k` with `m_1 <= ... <= m_k`.
//!
//! - [`arith`]: exact rationals and integer power comparison.
//! - [`enumerate`]: bounded depth-first search over denominator tuples.
//! - [`counting`]: A_k(n) and partial sums, with k = 1, 2 fast paths.
//! - [`instrument`]: exponents, thresholds, type classification and the
//!   binary reduction, as exact checks.

pub mod arith;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod instrument;

pub use arith::{frac_sub, pow_compare, ExactExponent, Fraction};
pub use counting::{a_1_fast, a_2_fast, a_k, a_k_with_types, partial_sum, CountRecord, PartialSum};
pub use enumerate::{
    count, denominator_bounds, enumerate, exists, search, search_filtered, DenomRange, Enumeration,
    Existence, Outcome, PrefixFilter, Representation, SearchBudget, SearchStats,
};
pub use error::{Error, Result};
pub use instrument::{
    alpha, beta, binary_reduce, classify, empirical_exponent, exponent_table, gamma, propagate_exponent,
    type_counts, ExponentRow, TypeCensus, TypeLabel,
};
