//! Truncated formal power series over exact rationals.
//!
//! Just enough ring structure to verify the generating-function identities
//! coefficientwise at a finite order: no lazy tails, no composition.

use crate::exact::{Int, Rat};
use crate::sequences::{franel4, s_seq};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesOpError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
}

/// Coefficients 0..=order of a formal power series in z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Rat::zero(); order + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, r: usize) -> &Rat {
        &self.coeffs[r]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Pad with zeros or drop high-order terms to reach `order`.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rat::zero());
        TruncatedSeries { coeffs }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesOpError> {
        if self.order() != rhs.order() {
            return Err(SeriesOpError::OrderMismatch(self.order(), rhs.order()));
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesOpError> {
        if self.order() != rhs.order() {
            return Err(SeriesOpError::OrderMismatch(self.order(), rhs.order()));
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Product truncated to the smaller order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by z^k; order grows by k so no coefficient is lost.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }
}

/// Expansion of (1+4z)^(-e) to the given order:
/// the z^r coefficient is (-4)^r C(e-1+r, r).
pub fn inv_pow_1p4z(e: u64, order: usize) -> TruncatedSeries {
    assert!(e >= 1);
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Int::one();
    for r in 0..=order as u64 {
        if r > 0 {
            // C(e-1+r, r) = C(e-2+r, r-1) * (e-1+r)/r, times -4
            c = c * Int::from(e - 1 + r) * Int::from(-4) / Int::from(r);
        }
        coeffs.push(Rat::from_integer(c.clone()));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Coefficients of W_k as a polynomial in its argument (integer vector).
fn w_coeffs(k: u64) -> Vec<Int> {
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut c = {
        // C(2k, k)
        let mut acc = Int::one();
        for i in 0..k {
            acc = acc * Int::from(2 * (2 * i + 1)) / Int::from(i + 1);
        }
        acc
    };
    out.push(c.clone());
    for j in 0..k {
        let num = Int::from(k + j + 1) * Int::from(k - j).pow(2) * Int::from(2 * j + 1);
        let den = Int::from(j + 1).pow(3) * Int::from(2 * (k - j) - 1);
        c = c * num / den;
        out.push(c.clone());
    }
    out
}

/// sum_{k=0}^{N} (k if weighted else 1) z^k (1+4z)^(-(k+1)) W_k(1/(1+4z)),
/// truncated to order N. The k-th summand starts at z^k, so all coefficients
/// up to N are exact.
pub fn w_generating_series(order: usize, weighted: bool) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(order);
    for k in 0..=order as u64 {
        if weighted && k == 0 {
            continue;
        }
        let rest = order - k as usize;
        let mut summand = TruncatedSeries::zero(rest);
        for (j, w) in w_coeffs(k).iter().enumerate() {
            let inv = inv_pow_1p4z(k + 1 + j as u64, rest);
            summand = summand.add(&inv.scale(&Rat::from_integer(w.clone()))).unwrap();
        }
        if weighted {
            summand = summand.scale(&Rat::from_integer(Int::from(k)));
        }
        acc = acc.add(&summand.shift(k as usize).resized(order)).unwrap();
    }
    acc
}

/// Report for the weighted generating-function identity
/// 5(1-4z) sum_k k z^k (1+4z)^(-(k+1)) W_k(1/(1+4z))
///   = sum_k ((5-8z)(1+4z)k + 4z(5-6z)) f4_k z^k.
#[derive(Debug, Clone)]
pub struct GfIdentityReport {
    pub order: usize,
    pub pass: bool,
    pub first_mismatch: Option<usize>,
}

/// Verify the identity above coefficientwise to the given order, reading the
/// right-hand side's f_k as the order-four Franel numbers.
pub fn verify_weighted_gf_identity(order: usize) -> GfIdentityReport {
    assert!(order >= 2);
    let weighted = w_generating_series(order, true);
    // LHS = 5(1-4z) * weighted
    let one_minus_4z = TruncatedSeries::from_coeffs(vec![Rat::one(), crate::exact::rat_int(-4)])
        .resized(order);
    let lhs = weighted.mul(&one_minus_4z).scale(&crate::exact::rat_int(5));
    // RHS coefficient of z^n:
    //   5n f_n + (12(n-1)+20) f_{n-1} - (32(n-2)+24) f_{n-2}
    let f: Vec<Int> = (0..=order as u64).map(franel4).collect();
    let mut rhs = Vec::with_capacity(order + 1);
    for n in 0..=order as i64 {
        let mut c = Int::from(5 * n) * &f[n as usize];
        if n >= 1 {
            c += Int::from(12 * (n - 1) + 20) * &f[(n - 1) as usize];
        }
        if n >= 2 {
            c -= Int::from(32 * (n - 2) + 24) * &f[(n - 2) as usize];
        }
        rhs.push(Rat::from_integer(c));
    }
    let rhs = TruncatedSeries::from_coeffs(rhs);
    let first_mismatch = (0..=order).find(|&n| lhs.coeff(n) != rhs.coeff(n));
    GfIdentityReport { order, pass: first_mismatch.is_none(), first_mismatch }
}

/// Check the unweighted generating series against f4 and the weighted one
/// against n (f4_n + 4 s_n), up to `order`. Returns the first failing index.
pub fn check_gf_coefficients(order: usize) -> Result<(), usize> {
    let unweighted = w_generating_series(order, false);
    let weighted = w_generating_series(order, true);
    for n in 0..=order {
        let f = franel4(n as u64);
        if unweighted.coeff(n) != &Rat::from_integer(f.clone()) {
            return Err(n);
        }
        let expect = Int::from(n as u64) * (f + Int::from(4) * s_seq(n as u64));
        if weighted.coeff(n) != &Rat::from_integer(expect) {
            return Err(n);
        }
    }
    Ok(())
}
