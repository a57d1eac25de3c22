//! Modular arithmetic in Z/m for m = p or p^2 (m < 2^63).
//!
//! Binomial coefficients mod m come from Pascal-row recurrences (addition
//! only), so they stay correct when p divides intermediate factorials.

use crate::exact::{Int, Rat};
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModError {
    #[error("denominator {denom} is not invertible modulo {modulus}")]
    NonInvertibleDenominator { denom: u64, modulus: u64 },
    #[error("Jacobi symbol requires an odd positive lower argument, got {0}")]
    EvenModulus(i64),
}

/// An element of Z/m, 0 <= value < m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus > 0);
        Residue { value: value % modulus, modulus }
    }
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + m as u128 - b as u128 % m as u128) % m as u128) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a mod m via extended Euclid; errors when gcd(a, m) > 1.
pub fn inv_mod(a: u64, m: u64) -> Result<u64, ModError> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(ModError::NonInvertibleDenominator { denom: a % m, modulus: m });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce an arbitrary-precision integer into [0, m).
pub fn reduce_int(n: &Int, m: u64) -> u64 {
    let m_big = Int::from(m);
    let mut r = n % &m_big;
    if r.is_negative() {
        r += &m_big;
    }
    let digits = r.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

/// The unique residue r with denom * r = numer (mod m).
pub fn reduce_rational(q: &Rat, m: u64) -> Result<Residue, ModError> {
    let den = reduce_int(q.denom(), m);
    let inv = inv_mod(den, m)?;
    let num = reduce_int(q.numer(), m);
    Ok(Residue::new(mul_mod(num, inv, m), m))
}

/// Jacobi symbol (a/n) for odd positive n; the Legendre symbol when n is prime.
///
/// ```
/// use pi_series_core::modular::jacobi;
/// assert_eq!(jacobi(-15, 7).unwrap(), -1);
/// assert!(jacobi(2, 10).is_err());
/// ```
pub fn jacobi(a: i64, n: u64) -> Result<i32, ModError> {
    if n == 0 || n % 2 == 0 {
        return Err(ModError::EvenModulus(n as i64));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        Ok(sign)
    } else {
        Ok(0)
    }
}

/// Pascal triangle rows 0..=n_max reduced mod m. Addition-only construction.
pub struct PascalMod {
    pub modulus: u64,
    rows: Vec<Vec<u64>>,
}

impl PascalMod {
    pub fn build(n_max: usize, m: u64) -> Self {
        let mut rows = Vec::with_capacity(n_max + 1);
        rows.push(vec![1 % m]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(1 % m);
            for k in 1..n {
                row.push(add_mod(prev[k - 1], prev[k], m));
            }
            row.push(1 % m);
            rows.push(row);
        }
        PascalMod { modulus: m, rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// C(n, k) mod m; zero outside the triangle.
    pub fn choose(&self, n: usize, k: i64) -> u64 {
        if k < 0 || k as usize > n {
            return 0;
        }
        self.rows[n][k as usize]
    }

    /// Central binomial C(2k, k) mod m.
    pub fn central(&self, k: usize) -> u64 {
        self.choose(2 * k, k as i64)
    }
}

/// Square root of a mod odd prime p (Tonelli-Shanks); None for non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 {
        return Some(a);
    }
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // write p-1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // any quadratic non-residue z
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
