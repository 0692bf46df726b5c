//! Exact nonnegative rationals over arbitrary-precision integers, and
//! exact comparison of integer powers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational number kept in lowest terms.
///
/// Zero is always stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: BigUint,
    den: BigUint,
}

impl Fraction {
    /// Builds `num/den` in canonical form. Fails when `den` is zero.
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn zero() -> Self {
        Fraction { num: BigUint::zero(), den: BigUint::one() }
    }

    pub fn one() -> Self {
        Fraction { num: BigUint::one(), den: BigUint::one() }
    }

    pub fn from_integer(v: impl Into<BigUint>) -> Self {
        Fraction { num: v.into(), den: BigUint::one() }
    }

    /// `1/m`. Fails for `m == 0`.
    pub fn unit(m: impl Into<BigUint>) -> Result<Self> {
        Self::new(BigUint::one(), m)
    }

    // Caller guarantees den != 0.
    fn reduce(num: BigUint, den: BigUint) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Fraction { num, den }
        } else {
            Fraction { num: num / &g, den: den / g }
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True for `1/m`, including `1/1`.
    pub fn is_unit(&self) -> bool {
        self.num.is_one()
    }

    /// `self - other`, or [`Error::Underflow`] when `other > self`.
    pub fn checked_sub(&self, other: &Fraction) -> Result<Fraction> {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        if rhs > lhs {
            return Err(Error::Underflow {
                minuend: self.to_string(),
                subtrahend: other.to_string(),
            });
        }
        Ok(Self::reduce(lhs - rhs, &self.den * &other.den))
    }

    pub fn mul_integer(&self, v: &BigUint) -> Fraction {
        Self::reduce(&self.num * v, self.den.clone())
    }

    /// Integer value when the denominator is one.
    pub fn to_integer(&self) -> Option<BigUint> {
        self.den.is_one().then(|| self.num.clone())
    }
}

/// Subtraction that fails on a negative result.
pub fn frac_sub(x: &Fraction, y: &Fraction) -> Result<Fraction> {
    x.checked_sub(y)
}

impl Add for &Fraction {
    type Output = Fraction;

    fn add(self, rhs: &Fraction) -> Fraction {
        if self.den == rhs.den {
            return Fraction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        Fraction::reduce(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Add for Fraction {
    type Output = Fraction;

    fn add(self, rhs: Fraction) -> Fraction {
        &self + &rhs
    }
}

impl std::iter::Sum for Fraction {
    fn sum<I: Iterator<Item = Fraction>>(iter: I) -> Self {
        iter.fold(Fraction::zero(), |acc, x| &acc + &x)
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        match s.split_once('/') {
            Some((p, q)) => Fraction::new(
                p.trim().parse::<BigUint>().map_err(|_| bad())?,
                q.trim().parse::<BigUint>().map_err(|_| bad())?,
            ),
            None => Ok(Fraction::from_integer(s.trim().parse::<BigUint>().map_err(|_| bad())?)),
        }
    }
}

/// An exact rational exponent such as `3/4` or `79/81`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactExponent(Fraction);

impl ExactExponent {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        Fraction::new(num, den).map(ExactExponent)
    }

    pub fn zero() -> Self {
        ExactExponent(Fraction::zero())
    }

    pub fn one() -> Self {
        ExactExponent(Fraction::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn as_fraction(&self) -> &Fraction {
        &self.0
    }

    pub fn checked_sub(&self, other: &ExactExponent) -> Result<ExactExponent> {
        self.0.checked_sub(&other.0).map(ExactExponent)
    }
}

impl Add for &ExactExponent {
    type Output = ExactExponent;

    fn add(self, rhs: &ExactExponent) -> ExactExponent {
        ExactExponent(&self.0 + &rhs.0)
    }
}

impl std::iter::Sum for ExactExponent {
    fn sum<I: Iterator<Item = ExactExponent>>(iter: I) -> Self {
        iter.fold(ExactExponent::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for ExactExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for ExactExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Orders `m^p` against `n^q` using exact integers.
///
/// Tries machine words first and falls back to big integers when either
/// power overflows.
pub fn pow_compare(m: &BigUint, p: u32, n: &BigUint, q: u32) -> Ordering {
    match (small_pow(m, p), small_pow(n, q)) {
        (Some(lhs), Some(rhs)) => return lhs.cmp(&rhs),
        // An overflowing power exceeds every power that fits.
        (None, Some(_)) => return Ordering::Greater,
        (Some(_), None) => return Ordering::Less,
        (None, None) => {}
    }
    m.pow(p).cmp(&n.pow(q))
}

fn small_pow(x: &BigUint, e: u32) -> Option<u128> {
    if e == 0 {
        return Some(1);
    }
    let base: u128 = u128::try_from(x).ok()?;
    base.checked_pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn sub_examples() {
        assert_eq!(frac_sub(&f(4, 5), &f(1, 2)).unwrap(), f(3, 10));
        assert_eq!(frac_sub(&f(1, 1), &f(1, 1)).unwrap(), Fraction::zero());
        assert_eq!(frac_sub(&f(2, 3), &f(1, 2)).unwrap(), f(1, 6));
        let z = frac_sub(&f(1, 1), &f(1, 1)).unwrap();
        assert_eq!((z.numer().clone(), z.denom().clone()), (big(0), big(1)));
    }

    #[test]
    fn sub_underflow() {
        assert!(matches!(frac_sub(&f(1, 3), &f(1, 2)), Err(Error::Underflow { .. })));
    }

    #[test]
    fn canonical_on_construction() {
        let x = f(6, 8);
        assert_eq!((x.numer(), x.denom()), (&big(3), &big(4)));
        assert_eq!(f(0, 7), Fraction::zero());
        assert!(Fraction::new(1u32, 0u32).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("10/4".parse::<Fraction>().unwrap(), f(5, 2));
        assert_eq!("3".parse::<Fraction>().unwrap().to_string(), "3");
        assert_eq!(f(79, 81).to_string(), "79/81");
        assert!("1/x".parse::<Fraction>().is_err());
    }

    #[test]
    fn pow_compare_examples() {
        assert_eq!(pow_compare(&big(3), 2, &big(10), 1), Ordering::Less);
        assert_eq!(pow_compare(&big(4), 1, &big(2), 2), Ordering::Equal);
        assert_eq!(pow_compare(&big(5), 2, &big(24), 1), Ordering::Greater);
    }

    #[test]
    fn pow_compare_overflowing_powers() {
        // 3^100 vs 2^159 and 2^158: 3^100 lies between them.
        assert_eq!(pow_compare(&big(3), 100, &big(2), 159), Ordering::Less);
        assert_eq!(pow_compare(&big(3), 100, &big(2), 158), Ordering::Greater);
        assert_eq!(pow_compare(&big(1), 1000, &big(1), 3), Ordering::Equal);
        assert_eq!(pow_compare(&big(2), 128, &big(4), 64), Ordering::Equal);
        let huge = big(3).pow(90);
        assert_eq!(pow_compare(&huge, 0, &big(1), 5), Ordering::Equal);
        assert_eq!(pow_compare(&huge, 1, &big(7), 3), Ordering::Greater);
        assert_eq!(pow_compare(&big(2), 1 << 20, &big(1), 9), Ordering::Greater);
    }

    #[test]
    fn pow_compare_exhaustive_small() {
        for m in 1..=100u64 {
            for n in 1..=100u64 {
                for p in 0..=16u32 {
                    for q in 0..=16u32 {
                        let want = big(m).pow(p).cmp(&big(n).pow(q));
                        assert_eq!(pow_compare(&big(m), p, &big(n), q), want, "{m}^{p} vs {n}^{q}");
                    }
                }
            }
        }
    }

    fn arb_fraction() -> impl Strategy<Value = Fraction> {
        (0u64..1_000_000, 1u64..1_000_000).prop_map(|(p, q)| f(p, q))
    }

    proptest! {
        #[test]
        fn sub_inverts_add(x in arb_fraction(), y in arb_fraction()) {
            let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
            let d = frac_sub(&hi, &lo).unwrap();
            prop_assert!(d.numer().gcd(d.denom()).is_one());
            prop_assert_eq!(&d + &lo, hi);
        }

        #[test]
        fn sums_are_canonical(x in arb_fraction(), y in arb_fraction()) {
            let s = &x + &y;
            prop_assert!(s.numer().gcd(s.denom()).is_one());
        }
    }
}
