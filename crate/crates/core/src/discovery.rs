//! Integer-relation detection (PSLQ) and the constant-identification
//! workflow: recognize pi*S as a quadratic radical and search (a, b) weights
//! that turn a series kernel into an algebraic multiple of 1/pi.
//!
//! PSLQ follows the standard fixed-point formulation (Bailey; see
//! https://www.davidhbailey.com/dhbtalks/dhb-carma-20100824.pdf) with
//! gamma = 2/sqrt(3).

use crate::bigfloat::{pi, BigFloat};
use crate::closedform::{self, AlgebraicExpr};
use crate::exact::{Int, Rat};
use crate::series::{sum_weighted, SeriesEntry, Status, TermKind};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscoveryError {
    #[error("need at least {need} digits for a vector of length {len}")]
    PrecisionTooLow { need: u32, len: usize },
    #[error("vector length {0} outside 2..=12")]
    BadLength(usize),
}

/// An integer relation sum r_i v_i ~ 0.
#[derive(Debug, Clone)]
pub struct Relation {
    pub coefficients: Vec<Int>,
    pub norm: Int,
    pub residual: BigFloat,
}

// fixed-point helpers (binary scale)

fn to_fixed(v: &BigFloat, bits: u32) -> Int {
    // mant / 10^scale * 2^bits
    let num = v.mantissa() << bits;
    let den = Int::from(10u32).pow(v.scale());
    let two_a = if num.is_negative() { &num * 2 - &den } else { &num * 2 + &den };
    two_a / (den * 2)
}

fn round_fixed(x: &Int, bits: u32) -> Int {
    let half = Int::one() << (bits - 1);
    (x + half) >> bits
}

fn mul_fixed(a: &Int, b: &Int, bits: u32) -> Int {
    (a * b) >> bits
}

fn div_fixed(a: &Int, b: &Int, bits: u32) -> Option<Int> {
    if b.is_zero() {
        return None;
    }
    Some((a << bits) / b)
}

fn sqrt_fixed(a: &Int, bits: u32) -> Int {
    num_integer::Roots::sqrt(&(a << bits))
}

/// PSLQ integer-relation search at `digits` working precision. Returns a
/// relation with max |r_i| <= max_norm and small residual, or None when the
/// norm bound proves no such relation exists at this precision.
pub fn pslq(values: &[BigFloat], digits: u32, max_norm: &Int) -> Result<Option<Relation>, DiscoveryError> {
    let n = values.len();
    if !(2..=12).contains(&n) {
        return Err(DiscoveryError::BadLength(n));
    }
    if digits < 10 * n as u32 {
        return Err(DiscoveryError::PrecisionTooLow { need: 10 * n as u32, len: n });
    }
    let bits = (digits as f64 * 3.322).ceil() as u32 + 64;
    let tol = Int::one() << (bits / 2);

    let x: Vec<Int> = values.iter().map(|v| to_fixed(v, bits)).collect();
    if x.iter().any(|v| v.is_zero()) {
        // a zero component is the trivial relation
        let mut coeffs = vec![Int::zero(); n];
        let i = x.iter().position(|v| v.is_zero()).unwrap();
        coeffs[i] = Int::one();
        return Ok(Some(Relation { coefficients: coeffs, norm: Int::one(), residual: BigFloat::zero(digits) }));
    }

    // gamma = 2/sqrt(3) in fixed point
    let gamma = sqrt_fixed(&div_fixed(&(Int::from(4) << bits), &(Int::from(3) << bits), bits).unwrap(), bits);

    let mut a = vec![vec![Int::zero(); n]; n];
    let mut b = vec![vec![Int::zero(); n]; n];
    for i in 0..n {
        a[i][i] = Int::one() << bits;
        b[i][i] = Int::one() << bits;
    }

    // partial norms s_k = sqrt(sum_{j>=k} x_j^2)
    let mut s = vec![Int::zero(); n];
    for k in 0..n {
        let mut t = Int::zero();
        for xj in &x[k..] {
            t += mul_fixed(xj, xj, bits);
        }
        s[k] = sqrt_fixed(&t, bits);
    }
    let t0 = s[0].clone();
    let mut y = x.clone();
    for k in 0..n {
        y[k] = div_fixed(&y[k], &t0, bits).unwrap();
        s[k] = div_fixed(&s[k], &t0, bits).unwrap();
    }

    // initial H (n x n-1, lower trapezoidal)
    let mut h = vec![vec![Int::zero(); n - 1]; n];
    for i in 0..n {
        if i + 1 < n && !s[i].is_zero() {
            h[i][i] = div_fixed(&s[i + 1], &s[i], bits).unwrap();
        }
        for j in 0..i.min(n - 1) {
            let sj = mul_fixed(&s[j], &s[j + 1], bits);
            if !sj.is_zero() {
                h[i][j] = div_fixed(&(-mul_fixed(&y[i], &y[j], bits)), &sj, bits).unwrap();
            }
        }
    }

    // initial size reduction
    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            if h[j][j].is_zero() {
                continue;
            }
            let t = round_fixed(&div_fixed(&h[i][j], &h[j][j], bits).unwrap(), bits);
            if t.is_zero() {
                continue;
            }
            let ts = &t << bits;
            y[j] = &y[j] + mul_fixed(&ts, &y[i], bits);
            for k in 0..=j {
                let d = mul_fixed(&ts, &h[j][k], bits);
                h[i][k] = &h[i][k] - d;
            }
            for k in 0..n {
                let da = mul_fixed(&ts, &a[j][k], bits);
                a[i][k] = &a[i][k] - da;
                let db = mul_fixed(&ts, &b[k][i], bits);
                b[k][j] = &b[k][j] + db;
            }
        }
    }

    let max_steps = 6000;
    for _ in 0..max_steps {
        // success detection
        for i in 0..n {
            if y[i].abs() < tol {
                let coeffs: Vec<Int> = (0..n).map(|j| round_fixed(&b[j][i], bits)).collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let norm = coeffs.iter().map(|c| c.abs()).max().unwrap();
                if &norm <= max_norm {
                    let residual = residual_of(values, &coeffs, digits);
                    let thresh = BigFloat::from_parts(Int::from(10u32).pow(15), digits);
                    if residual.abs().cmp_value(&thresh) == std::cmp::Ordering::Less {
                        return Ok(Some(Relation { coefficients: coeffs, norm, residual }));
                    }
                }
            }
        }
        // norm lower bound: 1 / max |H_ij|
        let mut recnorm = Int::zero();
        for row in &h {
            for v in row {
                if v.abs() > recnorm {
                    recnorm = v.abs();
                }
            }
        }
        if recnorm.is_zero() {
            return Ok(None);
        }
        let bound = ((Int::one() << (2 * bits)) / &recnorm) >> bits;
        if &(bound / Int::from(128)) > max_norm {
            return Ok(None);
        }

        // step: pick m maximizing gamma^(i+1) |h[i][i]|
        let mut m = 0usize;
        let mut best = Int::from(-1);
        let mut gpow = Int::one() << bits;
        for i in 0..n - 1 {
            gpow = mul_fixed(&gpow, &gamma, bits);
            let sz = mul_fixed(&gpow, &h[i][i].abs(), bits);
            if sz > best {
                best = sz;
                m = i;
            }
        }

        y.swap(m, m + 1);
        h.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }

        // corner rotation
        if m + 2 <= n - 1 {
            let t0v = sqrt_fixed(
                &(mul_fixed(&h[m][m], &h[m][m], bits) + mul_fixed(&h[m][m + 1], &h[m][m + 1], bits)),
                bits,
            );
            if t0v.is_zero() {
                return Ok(None);
            }
            let t1 = div_fixed(&h[m][m], &t0v, bits).unwrap();
            let t2 = div_fixed(&h[m][m + 1], &t0v, bits).unwrap();
            for i in m..n {
                let t3 = h[i][m].clone();
                let t4 = h[i][m + 1].clone();
                h[i][m] = mul_fixed(&t1, &t3, bits) + mul_fixed(&t2, &t4, bits);
                h[i][m + 1] = mul_fixed(&t1, &t4, bits) - mul_fixed(&t2, &t3, bits);
            }
        }

        // size reduction
        for i in m.max(1)..n {
            for j in (0..=(i - 1).min(m + 1).min(n - 2)).rev() {
                if h[j][j].is_zero() {
                    continue;
                }
                let t = round_fixed(&div_fixed(&h[i][j], &h[j][j], bits).unwrap(), bits);
                if t.is_zero() {
                    continue;
                }
                let ts = &t << bits;
                y[j] = &y[j] + mul_fixed(&ts, &y[i], bits);
                for k in 0..=j {
                    let d = mul_fixed(&ts, &h[j][k], bits);
                    h[i][k] = &h[i][k] - d;
                }
                for k in 0..n {
                    let da = mul_fixed(&ts, &a[j][k], bits);
                    a[i][k] = &a[i][k] - da;
                    let db = mul_fixed(&ts, &b[k][i], bits);
                    b[k][j] = &b[k][j] + db;
                }
            }
        }
    }
    Ok(None)
}

/// Exact-coefficient dot product with the input floats.
pub fn residual_of(values: &[BigFloat], coeffs: &[Int], digits: u32) -> BigFloat {
    let scale = values.iter().map(|v| v.scale()).max().unwrap_or(digits);
    let mut acc = BigFloat::zero(scale);
    for (v, c) in values.iter().zip(coeffs) {
        acc = acc.add(&v.mul(&BigFloat::from_parts(c.clone(), 0), scale));
    }
    acc
}

// ---------------------------------------------------------------------------
// identification

fn sqrt_of_rational_over_pi(q: &Rat) -> AlgebraicExpr {
    // sqrt(u/v) = sqrt(u v)/v; split off the square part
    let (s, d) = closedform::extract_square(&(q.numer() * q.denom()));
    let coef = Rat::new(s, q.denom().clone());
    let num = if d == 1 {
        AlgebraicExpr::rational(coef)
    } else {
        AlgebraicExpr::Mul(
            Box::new(AlgebraicExpr::rational(coef)),
            Box::new(AlgebraicExpr::sqrt(AlgebraicExpr::integer(d as i64))),
        )
    };
    AlgebraicExpr::Div(Box::new(num), Box::new(AlgebraicExpr::Pi))
}

/// Check a reconstructed expression against the series value.
fn matches_value(expr: &AlgebraicExpr, s: &BigFloat, digits: u32) -> bool {
    match closedform::eval_expr(expr, digits) {
        Ok(v) => v.agrees_rel(s, digits - 12),
        Err(_) => false,
    }
}

/// Reconstruct a closed form C with S = C/pi-shape from a converged series
/// value at >= 60 digits. Tries (pi S)^2 rational, then pi S sqrt(d) rational
/// over the candidate discriminants, then pi S in Q + Q sqrt(d).
pub fn identify_series(s: &BigFloat, digits: u32, d_candidates: &[u64]) -> Option<AlgebraicExpr> {
    let scale = digits + 10;
    let pi_v = pi(scale);
    let pis = s.mul(&pi_v, scale);
    let one = BigFloat::from_int(1, scale);
    // A height-N rational approximates any real to ~N^-2, so relations whose
    // norm squared exceeds the residual threshold are indistinguishable from
    // coincidence; cap the norm well below that.
    let wide = Int::from(10u32).pow(((digits.saturating_sub(15)) / 2).saturating_sub(2).min(40));

    // (pi S)^2 rational?
    let sq = pis.mul(&pis, scale);
    if let Ok(Some(rel)) = pslq(&[one.clone(), sq], digits, &wide) {
        let (r0, r1) = (&rel.coefficients[0], &rel.coefficients[1]);
        if !r1.is_zero() {
            let q = Rat::new(-r0.clone(), r1.clone());
            if q.is_positive() {
                let expr = sqrt_of_rational_over_pi(&q);
                if matches_value(&expr, s, digits) {
                    return Some(expr);
                }
            }
        }
    }
    // pi S sqrt(d) rational?
    for &d in d_candidates {
        let sd = BigFloat::from_int(d as i64, scale).sqrt(scale);
        let v = pis.mul(&sd, scale);
        if let Ok(Some(rel)) = pslq(&[one.clone(), v], digits, &wide) {
            let (r0, r1) = (&rel.coefficients[0], &rel.coefficients[1]);
            if r1.is_zero() {
                continue;
            }
            let q = Rat::new(-r0.clone(), r1.clone());
            // S = q / (pi sqrt(d))
            let expr = AlgebraicExpr::Div(
                Box::new(AlgebraicExpr::rational(q)),
                Box::new(AlgebraicExpr::Mul(
                    Box::new(AlgebraicExpr::sqrt(AlgebraicExpr::integer(d as i64))),
                    Box::new(AlgebraicExpr::Pi),
                )),
            );
            if matches_value(&expr, s, digits) {
                return Some(expr);
            }
        }
    }
    // pi S in Q + Q sqrt(d)?
    for &d in d_candidates {
        let sd = BigFloat::from_int(d as i64, scale).sqrt(scale);
        if let Ok(Some(rel)) = pslq(&[pis.clone(), one.clone(), sd], digits, &wide) {
            let (r0, r1, r2) = (&rel.coefficients[0], &rel.coefficients[1], &rel.coefficients[2]);
            if r0.is_zero() {
                continue;
            }
            let c0 = Rat::new(-r1.clone(), r0.clone());
            let c1 = Rat::new(-r2.clone(), r0.clone());
            // S = (c0 + c1 sqrt(d)) / pi
            let num = AlgebraicExpr::Add(
                Box::new(AlgebraicExpr::rational(c0)),
                Box::new(AlgebraicExpr::Mul(
                    Box::new(AlgebraicExpr::rational(c1)),
                    Box::new(AlgebraicExpr::sqrt(AlgebraicExpr::integer(d as i64))),
                )),
            );
            let expr = AlgebraicExpr::Div(Box::new(num), Box::new(AlgebraicExpr::Pi));
            if matches_value(&expr, s, digits) {
                return Some(expr);
            }
        }
    }
    None
}

/// Discriminants appearing in the registry right-hand sides.
pub const DEFAULT_DISCRIMINANTS: [u64; 13] = [1, 2, 3, 5, 6, 7, 10, 13, 15, 35, 39, 95, 130];

/// Result of a weight search: primitive (a, b) and the closed form C with
/// sum (a k + b) t_k / m^k = C / pi-shape.
#[derive(Debug, Clone)]
pub struct WeightSearch {
    pub a: Int,
    pub b: Int,
    pub c_expr: AlgebraicExpr,
}

/// Search integer weights (a, b) such that sum (a k + b) t_k / m^k is an
/// algebraic multiple of 1/pi with quadratic part sqrt(d). The kernel and
/// base come from `template` (its own a, b are ignored).
pub fn search_ab(
    template: &SeriesEntry,
    d: u64,
    digits: u32,
    max_norm: &Int,
) -> Result<Option<WeightSearch>, DiscoveryError> {
    let a1 = match sum_weighted(template, digits, Some((1, 0))) {
        Ok(s) => s.value,
        Err(_) => return Ok(None),
    };
    let a0 = match sum_weighted(template, digits, Some((0, 1))) {
        Ok(s) => s.value,
        Err(_) => return Ok(None),
    };
    let scale = digits + 10;
    let pi_v = pi(scale);
    let sd = BigFloat::from_int(d as i64, scale).sqrt(scale);
    let v1 = a1.mul(&pi_v, scale).mul(&sd, scale);
    let v2 = a0.mul(&pi_v, scale).mul(&sd, scale);
    let one = BigFloat::from_int(1, scale);
    let Some(rel) = pslq(&[v1, v2, one], digits, max_norm)? else {
        return Ok(None);
    };
    let (r1, r2, r3) = (&rel.coefficients[0], &rel.coefficients[1], &rel.coefficients[2]);
    if r1.is_zero() && r2.is_zero() {
        return Ok(None);
    }
    let mut g = r1.gcd(r2);
    if g.is_zero() {
        g = Int::one();
    }
    let (mut a, mut b, mut r3n) = (r1 / &g, r2 / &g, Rat::new(-r3.clone(), g));
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
        r3n = -r3n;
    }
    // (a A1 + b A0) pi sqrt(d) = r3n  =>  C = r3n sqrt(d) / d
    let coef = r3n / Rat::from_integer(Int::from(d));
    let c_expr = AlgebraicExpr::Div(
        Box::new(AlgebraicExpr::Mul(
            Box::new(AlgebraicExpr::rational(coef)),
            Box::new(AlgebraicExpr::sqrt(AlgebraicExpr::integer(d as i64))),
        )),
        Box::new(AlgebraicExpr::Pi),
    );
    // numeric confirmation with the recovered weights
    let check = SeriesEntry {
        id: format!("{}#search", template.id),
        status: Status::Conjectural,
        a: match i64::try_from(&a) {
            Ok(v) => v,
            Err(_) => return Ok(None),
        },
        b: match i64::try_from(&b) {
            Ok(v) => v,
            Err(_) => return Ok(None),
        },
        base: template.base.clone(),
        kind: template.kind.clone(),
        rhs: c_expr.clone(),
        rhs_text: closedform::format_expr(&c_expr),
        label: String::new(),
    };
    match crate::series::verify_entry(&check, digits.min(40)) {
        Ok(r) if r.pass => Ok(Some(WeightSearch { a, b, c_expr })),
        _ => Ok(None),
    }
}

/// Convenience constructor for search templates.
pub fn search_template(kind: TermKind, base: Rat) -> SeriesEntry {
    SeriesEntry {
        id: "search".into(),
        status: Status::Conjectural,
        a: 1,
        b: 0,
        base,
        kind,
        rhs: AlgebraicExpr::Pi,
        rhs_text: "pi".into(),
        label: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn pslq_finds_golden_ratio_polynomial() {
        let scale = 80;
        let phi = BigFloat::from_int(5, scale)
            .sqrt(scale)
            .add(&BigFloat::from_int(1, scale))
            .div(&BigFloat::from_int(2, scale), scale);
        let phi2 = phi.mul(&phi, scale);
        let one = BigFloat::from_int(1, scale);
        let rel = pslq(&[one, phi.clone(), phi2], 70, &Int::from(1000)).unwrap().unwrap();
        // phi^2 = phi + 1 up to overall sign
        let c: Vec<i64> = rel.coefficients.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert!(c == [1, 1, -1] || c == [-1, -1, 1], "got {c:?}");
    }

    #[test]
    fn pslq_finds_sqrt2_relation() {
        let scale = 80;
        let r2 = BigFloat::from_int(2, scale).sqrt(scale);
        let two = BigFloat::from_int(2, scale);
        let one = BigFloat::from_int(1, scale);
        let rel = pslq(&[one, r2, two], 70, &Int::from(1000)).unwrap().unwrap();
        let c: Vec<i64> = rel.coefficients.iter().map(|c| i64::try_from(c).unwrap()).collect();
        // -2 + 0*sqrt2 + 1*2 = 0 or a scalar multiple
        assert_eq!(c[1], 0);
        assert_eq!(c[0] + 2 * c[2], 0);
        assert!(c[0] != 0);
    }

    #[test]
    fn pslq_declines_pi_rationality() {
        let p = pi(60);
        let one = BigFloat::from_int(1, 60);
        let got = pslq(&[one, p], 60, &Int::from(1_000_000)).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn pslq_rejects_low_precision() {
        let one = BigFloat::from_int(1, 20);
        let two = BigFloat::from_int(2, 20);
        let three = BigFloat::from_int(3, 20);
        assert!(matches!(
            pslq(&[one, two, three], 20, &Int::from(10)),
            Err(DiscoveryError::PrecisionTooLow { need: 30, len: 3 })
        ));
    }

    #[test]
    fn pslq_minimal_polynomials_of_quadratic_irrationals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(crate::test_seed());
        let scale = 90;
        let mut done = 0;
        while done < 20 {
            // alpha = (p + q sqrt(d)) / r, minimal polynomial
            // r^2 x^2 - 2 p r x + (p^2 - q^2 d) = 0
            let p = rng.gen_range(-7..=7i64);
            let q = rng.gen_range(1..=7i64);
            let r = rng.gen_range(1..=7i64);
            let d = [2i64, 3, 5, 6, 7, 10][rng.gen_range(0..6)];
            let c2 = r * r;
            let c1 = -2 * p * r;
            let c0 = p * p - q * q * d;
            let g = c2.gcd(&c1).gcd(&c0);
            let (c2, c1, c0) = (c2 / g, c1 / g, c0 / g);
            if c0 == 0 || c2.abs().max(c1.abs()).max(c0.abs()) > 50 {
                continue;
            }
            let alpha = BigFloat::from_int(d, scale)
                .sqrt(scale)
                .mul(&BigFloat::from_int(q, scale), scale)
                .add(&BigFloat::from_int(p, scale))
                .div(&BigFloat::from_int(r, scale), scale);
            let alpha2 = alpha.mul(&alpha, scale);
            let one = BigFloat::from_int(1, scale);
            let rel = pslq(&[one, alpha.clone(), alpha2], 80, &Int::from(200))
                .unwrap()
                .unwrap_or_else(|| panic!("no relation for p={p} q={q} r={r} d={d}"));
            let c: Vec<i64> = rel.coefficients.iter().map(|c| i64::try_from(c).unwrap()).collect();
            assert!(
                (c[0] == c0 && c[1] == c1 && c[2] == c2) || (c[0] == -c0 && c[1] == -c1 && c[2] == -c2),
                "minimal polynomial mismatch: got {c:?}, want ({c0},{c1},{c2})"
            );
            done += 1;
        }
    }

    #[test]
    fn pslq_residuals_survive_extra_precision() {
        // soundness: re-evaluate each returned relation 20 digits higher
        let mk = |scale: u32| {
            let r3 = BigFloat::from_int(3, scale).sqrt(scale);
            let v = r3.mul(&BigFloat::from_int(5, scale), scale).add(&BigFloat::from_int(7, scale));
            vec![BigFloat::from_int(1, scale), r3, v]
        };
        let rel = pslq(&mk(80), 70, &Int::from(100)).unwrap().unwrap();
        let hi = residual_of(&mk(100), &rel.coefficients, 90);
        let thresh = BigFloat::from_parts(Int::one(), 60);
        assert!(hi.abs().cmp_value(&thresh) == std::cmp::Ordering::Less);
    }

    #[test]
    fn identify_unit_value() {
        // S = 1/pi exactly: (pi S)^2 = 1
        let scale = 70;
        let s = BigFloat::from_int(1, scale).div(&pi(scale), scale);
        let expr = identify_series(&s, 60, &DEFAULT_DISCRIMINANTS).unwrap();
        let sq = closedform::pi_square(&expr).unwrap();
        assert_eq!(sq, rat_int(1));
    }

    #[test]
    fn search_template_shapes() {
        let t = search_template(TermKind::Franel4, rat_int(36));
        assert_eq!(t.a, 1);
        assert_eq!(t.base, rat(36, 1));
    }
}
