//! Cornacchia's algorithm for x^2 + d*y^2 = p or 2p.
//!
//! Square roots of -d modulo the prime part come from Tonelli-Shanks; the
//! small cofactor (2, or a small form coefficient) is handled by CRT lifting
//! before the Euclidean descent.

use crate::primes::is_prime;
use crate::modular::sqrt_mod_prime;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CornacchiaError {
    #[error("target {target} is not p or 2p for a prime p coprime to 2d={two_d}")]
    BadTarget { target: u64, two_d: u64 },
}

/// A representation x^2 + d*y^2 = target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadRep {
    pub x: u64,
    pub y: u64,
    pub d: u64,
    pub target: u64,
}

impl QuadRep {
    pub fn holds(&self) -> bool {
        self.x * self.x + self.d * self.y * self.y == self.target
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All square roots of -d mod m, for m = c * p with p prime and c small.
fn sqrt_neg_d_mod(d: u64, m: u64, p: u64) -> Vec<u64> {
    let c = m / p;
    let target = |r: u64| (r as u128 * r as u128 + d as u128) % m as u128 == 0;
    if c == 1 {
        match sqrt_mod_prime((p - (d % p)) % p, p) {
            Some(r) => vec![r, p - r].into_iter().filter(|&r| target(r % m)).collect(),
            None => Vec::new(),
        }
    } else if c % p == 0 || p < 64 {
        // degenerate split; m is small enough to enumerate
        (0..m).filter(|&r| target(r)).collect()
    } else {
        let rp = match sqrt_mod_prime((p - (d % p)) % p, p) {
            Some(r) => r,
            None => return Vec::new(),
        };
        let rc: Vec<u64> = (0..c).filter(|&r| (r * r + d) % c == 0).collect();
        let mut out = Vec::new();
        for &a in &[rp, p - rp] {
            for &b in &rc {
                // CRT: r = a (mod p), r = b (mod c)
                for r in (0..m).skip(a as usize).step_by(p as usize) {
                    if r % c == b && target(r) {
                        out.push(r);
                        break;
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Primitive solutions of x^2 + d*y^2 = m where m = c * p, c small, p prime.
fn represent(d: u64, m: u64, p: u64) -> Vec<(u64, u64)> {
    let mut sols = Vec::new();
    for r0 in sqrt_neg_d_mod(d, m, p) {
        let mut a = m;
        let mut b = r0;
        let lim = isqrt(m);
        while b > lim {
            let t = a % b;
            a = b;
            b = t;
        }
        let rem = m - b * b;
        if rem % d == 0 {
            let y2 = rem / d;
            let y = isqrt(y2);
            if y * y == y2 {
                sols.push((b, y));
                if d == 1 {
                    sols.push((y, b));
                }
            }
        }
    }
    sols.sort_unstable();
    sols.dedup();
    sols
}

/// Some (x, y) with x^2 + d*y^2 = target and x minimal, if a representation
/// exists. `target` must be p or 2p for a prime p not dividing 2d.
pub fn cornacchia(d: u64, target: u64) -> Result<Option<QuadRep>, CornacchiaError> {
    let bad = CornacchiaError::BadTarget { target, two_d: 2 * d };
    let p = if is_prime(target) {
        target
    } else if target % 2 == 0 && is_prime(target / 2) {
        target / 2
    } else {
        return Err(bad);
    };
    if d == 0 || (2 * d) % p == 0 {
        return Err(bad);
    }
    let sols = represent(d, target, p);
    let rep = sols
        .into_iter()
        .min_by_key(|&(x, _)| x)
        .map(|(x, y)| QuadRep { x, y, d, target });
    if let Some(r) = &rep {
        assert!(r.holds(), "cornacchia postcondition violated: {r:?}");
    }
    Ok(rep)
}

/// Primitive solutions plus the doubled solutions of m/4 when 4 | m.
/// Covers the imprimitive (gcd = 2) representations that appear when an even
/// form coefficient meets an even target.
fn represent_all(d: u64, m: u64, p: u64) -> Vec<(u64, u64)> {
    let mut sols = represent(d, m, p);
    if m % 4 == 0 {
        for (x, y) in represent_all(d, m / 4, p) {
            sols.push((2 * x, 2 * y));
        }
    }
    sols
}

/// Solve a_coef*x^2 + d*y^2 = target (target = p or 2p). Used by the
/// quadratic-form case tables, where a_coef is squarefree and small.
pub fn represent_form(a_coef: u64, d: u64, target: u64, p: u64) -> Option<(u64, u64)> {
    if a_coef == 1 {
        return represent_all(d, target, p).into_iter().min_by_key(|&(x, _)| x);
    }
    // a*x^2 + d*y^2 = t  <=>  (a*x)^2 + (a*d)*y^2 = a*t with a | x-part
    let m = a_coef * target;
    represent_all(a_coef * d, m, p)
        .into_iter()
        .filter(|(u, _)| u % a_coef == 0)
        .map(|(u, y)| (u / a_coef, y))
        .min_by_key(|&(x, _)| x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::jacobi;
    use crate::primes::primes_in;

    /// Exhaustive-search oracle, independent of the Euclidean descent.
    fn brute(a_coef: u64, d: u64, target: u64) -> Option<(u64, u64)> {
        let mut best: Option<(u64, u64)> = None;
        let mut x = 0;
        while a_coef * x * x <= target {
            let rem = target - a_coef * x * x;
            if rem % d == 0 {
                let y = (0..).take_while(|&y| y * y <= rem / d).find(|&y| y * y == rem / d);
                if let Some(y) = y {
                    if best.map_or(true, |(bx, _)| x < bx) {
                        best = Some((x, y));
                    }
                }
            }
            x += 1;
        }
        best
    }

    #[test]
    fn cornacchia_examples() {
        let r = cornacchia(4, 13).unwrap().unwrap();
        assert_eq!((r.x, r.y), (3, 1));
        let r = cornacchia(7, 11).unwrap().unwrap();
        assert_eq!((r.x, r.y), (2, 1));
        assert_eq!(cornacchia(15, 7).unwrap(), None);
        assert_eq!(jacobi(-15, 7).unwrap(), -1);
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(cornacchia(4, 15).is_err()); // 15 = 3*5, neither p nor 2p
        assert!(cornacchia(3, 9).is_err());
        assert!(cornacchia(5, 10).is_err()); // p = 5 divides 2d
    }

    #[test]
    fn matches_exhaustive_search_on_prime_targets() {
        for d in [1u64, 2, 3, 4, 5, 7, 10, 15, 42, 70, 78, 130, 165, 210] {
            for p in primes_in(3, 600, &[]) {
                if (2 * d) % p == 0 {
                    continue;
                }
                for target in [p, 2 * p] {
                    let got = cornacchia(d, target).unwrap().map(|r| (r.x, r.y));
                    let want = brute(1, d, target);
                    assert_eq!(got.is_some(), want.is_some(), "d={d} target={target}");
                    if let (Some(g), Some(w)) = (got, want) {
                        assert_eq!(g.0, w.0, "minimal x mismatch d={d} target={target}");
                        assert_eq!(g.0 * g.0 + d * g.1 * g.1, target);
                        assert_eq!(w.0 * w.0 + d * w.1 * w.1, target);
                    }
                }
            }
        }
    }

    #[test]
    fn scaled_forms_match_exhaustive_search() {
        let forms = [(2u64, 21u64), (3, 14), (6, 7), (5, 14), (7, 10), (3, 55), (11, 15), (14, 15)];
        for (a, d) in forms {
            for p in primes_in(3, 400, &[]) {
                if (2 * a * d) % p == 0 {
                    continue;
                }
                for target in [p, 2 * p] {
                    let got = represent_form(a, d, target, p);
                    let want = brute(a, d, target);
                    assert_eq!(got.map(|s| s.0), want.map(|s| s.0), "a={a} d={d} t={target}");
                    if let Some((x, y)) = got {
                        assert_eq!(a * x * x + d * y * y, target);
                    }
                }
            }
        }
    }
}
