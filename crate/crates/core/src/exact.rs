//! Exact arbitrary-precision integers and rationals.
//!
//! Everything downstream (sequences, congruence sweeps, series terms) is
//! generated exactly in these types and only rounded once at the float
//! boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always kept in lowest terms by `num-rational`.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,
}

/// Binomial coefficient C(n, k); zero for k < 0 or k > n.
pub fn binomial(n: u64, k: i64) -> Int {
    if k < 0 || (k as u64) > n {
        return Int::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Exact rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(Int::from(num))
}

/// p-adic valuation of a nonzero integer.
pub fn padic_val_int(n: &Int, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = Int::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation v_p(q) = v_p(numerator) - v_p(denominator).
pub fn padic_val(q: &Rat, p: u64) -> Result<i64, ExactError> {
    if q.is_zero() {
        return Err(ExactError::ZeroValuation);
    }
    Ok(padic_val_int(q.numer(), p) - padic_val_int(q.denom(), p))
}

/// Parse a rational "a/b" or "a" with optional sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let n: Int = num.trim().parse().ok()?;
            let d: Int = den.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: Int = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Render a rational as "a" or "a/b".
pub fn format_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True if q is a positive integer.
pub fn is_positive_integer(q: &Rat) -> bool {
    q.is_integer() && q.is_positive()
}
