//! Decimal fixed-point big floats: value = mantissa / 10^scale.
//!
//! Precision is explicit everywhere; terms are generated exactly upstream and
//! rounded once on entry, so no error compounds inside a summation loop.
//! Pi comes from binary splitting of the Chudnovsky series, which is
//! independent of every series this crate verifies.

use crate::exact::{Int, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision decimal fixed-point value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: Int,
    scale: u32,
}

/// Rounded division, ties away from zero.
fn round_div(a: &Int, b: &Int) -> Int {
    let two_a = if (a.is_negative()) ^ (b.is_negative()) { a * 2 - b } else { a * 2 + b };
    two_a / (b * 2)
}

fn pow10(e: u32) -> Int {
    Int::from(10u32).pow(e)
}

impl BigFloat {
    pub fn zero(scale: u32) -> Self {
        BigFloat { mant: Int::zero(), scale }
    }

    pub fn from_int(n: i64, scale: u32) -> Self {
        BigFloat { mant: Int::from(n) * pow10(scale), scale }
    }

    pub fn from_parts(mant: Int, scale: u32) -> Self {
        BigFloat { mant, scale }
    }

    pub fn mantissa(&self) -> &Int {
        &self.mant
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Round an exact rational to `scale` decimal places.
    pub fn from_rat(q: &Rat, scale: u32) -> Self {
        BigFloat { mant: round_div(&(q.numer() * pow10(scale)), q.denom()), scale }
    }

    /// Parse a plain decimal string like "-3.14159" or "22.0877".
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mant: Int = digits.parse().ok()?;
        let mant = if neg { -mant } else { mant };
        Some(BigFloat { mant, scale: frac_part.len() as u32 })
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.mant.clone(), pow10(self.scale))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Change scale, rounding when the new scale is coarser.
    pub fn rescale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            BigFloat { mant: &self.mant * pow10(scale - self.scale), scale }
        } else {
            BigFloat { mant: round_div(&self.mant, &pow10(self.scale - scale)), scale }
        }
    }

    fn aligned(&self, rhs: &Self) -> (Int, Int, u32) {
        let scale = self.scale.max(rhs.scale);
        let a = &self.mant * pow10(scale - self.scale);
        let b = &rhs.mant * pow10(scale - rhs.scale);
        (a, b, scale)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b, scale) = self.aligned(rhs);
        BigFloat { mant: a + b, scale }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let (a, b, scale) = self.aligned(rhs);
        BigFloat { mant: a - b, scale }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, scale: self.scale }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), scale: self.scale }
    }

    pub fn mul(&self, rhs: &Self, scale: u32) -> Self {
        let prod = &self.mant * &rhs.mant; // at scale self.scale + rhs.scale
        let have = self.scale + rhs.scale;
        BigFloat { mant: prod, scale: have }.rescale(scale)
    }

    pub fn div(&self, rhs: &Self, scale: u32) -> Self {
        assert!(!rhs.mant.is_zero(), "division by zero");
        // self/rhs = mant_a * 10^(scale + scale_b - scale_a) / mant_b
        let shift = scale as i64 + rhs.scale as i64 - self.scale as i64;
        let num = if shift >= 0 {
            &self.mant * pow10(shift as u32)
        } else {
            round_div(&self.mant, &pow10((-shift) as u32))
        };
        BigFloat { mant: round_div(&num, &rhs.mant), scale }
    }

    pub fn powi(&self, mut exp: u64, scale: u32) -> Self {
        let work = scale + 8;
        let mut base = self.rescale(work);
        let mut acc = BigFloat::from_int(1, work);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, work);
            }
            base = base.mul(&base, work);
            exp >>= 1;
        }
        acc.rescale(scale)
    }

    /// Floor-style k-th root of the rescaled mantissa. Negative inputs are
    /// allowed for odd k only.
    pub fn nth_root(&self, k: u32, scale: u32) -> Self {
        assert!(k >= 1);
        if self.mant.is_negative() {
            assert!(k % 2 == 1, "even root of negative");
            return self.neg().nth_root(k, scale).neg();
        }
        // value = m / 10^s; root = (m * 10^(k*scale - s))^(1/k) / 10^scale
        let target_exp = k as i64 * scale as i64 - self.scale as i64;
        let m = if target_exp >= 0 {
            &self.mant * pow10(target_exp as u32)
        } else {
            &self.mant / pow10((-target_exp) as u32)
        };
        BigFloat { mant: num_integer::Roots::nth_root(&m, k), scale }
    }

    pub fn sqrt(&self, scale: u32) -> Self {
        self.nth_root(2, scale)
    }

    pub fn cmp_value(&self, rhs: &Self) -> std::cmp::Ordering {
        let (a, b, _) = self.aligned(rhs);
        a.cmp(&b)
    }

    /// |self - rhs| < 10^-digits.
    pub fn agrees_abs(&self, rhs: &Self, digits: u32) -> bool {
        let diff = self.sub(rhs).abs();
        diff.cmp_value(&BigFloat::from_parts(Int::one(), digits)) == std::cmp::Ordering::Less
    }

    /// Agreement to `digits` significant digits relative to the larger magnitude.
    pub fn agrees_rel(&self, rhs: &Self, digits: u32) -> bool {
        let diff = self.sub(rhs).abs();
        let mag = if self.abs().cmp_value(&rhs.abs()) == std::cmp::Ordering::Less {
            rhs.abs()
        } else {
            self.abs()
        };
        let one = BigFloat::from_int(1, self.scale.max(rhs.scale));
        let mag = if mag.cmp_value(&one) == std::cmp::Ordering::Less { one } else { mag };
        let bound = mag.mul(&BigFloat::from_parts(Int::one(), digits), self.scale.max(rhs.scale));
        diff.cmp_value(&bound) == std::cmp::Ordering::Less
    }

    /// Base-10 logarithm estimate of |value|, for ratio windows; None if zero.
    pub fn log10_approx(&self) -> Option<f64> {
        if self.mant.is_zero() {
            return None;
        }
        let bits = self.mant.bits();
        // refine with the top 64 bits
        let top = (&self.mant.abs() >> (bits.saturating_sub(53))).to_f64().unwrap_or(1.0);
        Some(top.log10() + (bits.saturating_sub(53) as f64) * std::f64::consts::LN_2 / std::f64::consts::LN_10
            - self.scale as f64)
    }

    /// Decimal rendering with `sig` significant digits, scientific form.
    pub fn sci_string(&self, sig: usize) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let digits = self.mant.abs().to_string();
        let point = digits.len() as i64 - 1 - self.scale as i64; // exponent
        let rounded = round_decimal_string(&digits, sig);
        let (digits, point) = (rounded.0, point + rounded.1);
        let sign = if self.mant.is_negative() { "-" } else { "" };
        let mantissa = if digits.len() > 1 {
            format!("{}.{}", &digits[..1], &digits[1..])
        } else {
            digits.clone()
        };
        format!("{sign}{mantissa}e{point}")
    }

    /// Plain decimal rendering with `sig` significant digits (for values of
    /// moderate exponent, e.g. pi).
    pub fn decimal_string(&self, sig: usize) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let digits = self.mant.abs().to_string();
        let int_len = digits.len() as i64 - self.scale as i64;
        let (digits, carry) = round_decimal_string(&digits, sig);
        let int_len = int_len + carry;
        let sign = if self.mant.is_negative() { "-" } else { "" };
        if int_len <= 0 {
            let zeros = "0".repeat((-int_len) as usize);
            format!("{sign}0.{zeros}{digits}")
        } else if (int_len as usize) >= digits.len() {
            let zeros = "0".repeat(int_len as usize - digits.len());
            format!("{sign}{digits}{zeros}")
        } else {
            format!("{sign}{}.{}", &digits[..int_len as usize], &digits[int_len as usize..])
        }
    }
}

/// Round a digit string to `sig` digits; returns (digits, carry) where carry
/// is 1 when rounding overflowed into a new leading digit.
fn round_decimal_string(digits: &str, sig: usize) -> (String, i64) {
    if digits.len() <= sig {
        return (digits.to_string(), 0);
    }
    let keep: Vec<u8> = digits.as_bytes()[..sig].to_vec();
    let next = digits.as_bytes()[sig] - b'0';
    let mut keep = keep;
    if next >= 5 {
        let mut i = sig;
        loop {
            if i == 0 {
                keep.insert(0, b'1');
                return (String::from_utf8(keep).unwrap()[..sig].to_string(), 1);
            }
            i -= 1;
            if keep[i] == b'9' {
                keep[i] = b'0';
            } else {
                keep[i] += 1;
                break;
            }
        }
    }
    (String::from_utf8(keep).unwrap(), 0)
}

const CHUDNOVSKY_Q: u64 = 10_939_058_860_032_000; // 640320^3 / 24

fn chudnovsky_split(a: u64, b: u64) -> (Int, Int, Int) {
    if b - a == 1 {
        if a == 0 {
            return (Int::one(), Int::one(), Int::from(13_591_409u64));
        }
        let k = a;
        let p = -Int::from(6 * k - 5) * Int::from(2 * k - 1) * Int::from(6 * k - 1);
        let q = Int::from(k).pow(3) * Int::from(CHUDNOVSKY_Q);
        let t = &p * (Int::from(13_591_409u64) + Int::from(545_140_134u64) * Int::from(k));
        (p, q, t)
    } else {
        let m = (a + b) / 2;
        let (pl, ql, tl) = chudnovsky_split(a, m);
        let (pr, qr, tr) = chudnovsky_split(m, b);
        (&pl * &pr, &ql * &qr, tl * qr + pl * tr)
    }
}

/// Pi to `digits` significant decimal digits (digits <= 10000).
///
/// ```
/// use pi_series_core::bigfloat::pi;
/// assert_eq!(pi(20).decimal_string(20), "3.1415926535897932385");
/// ```
pub fn pi(digits: u32) -> BigFloat {
    assert!(digits >= 1 && digits <= 10_000, "pi digits out of range");
    let scale = digits + 10;
    let terms = (digits as u64) / 14 + 3;
    let (_, q, t) = chudnovsky_split(0, terms);
    let sqrt10005 = num_integer::Roots::sqrt(&(Int::from(10_005u64) * pow10(2 * scale)));
    let mant = round_div(&(Int::from(426_880u64) * sqrt10005 * &q), &t);
    BigFloat { mant, scale }.rescale(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937511";

    #[test]
    fn pi_reference_digits() {
        assert_eq!(pi(20).decimal_string(20), "3.1415926535897932385");
        assert_eq!(pi(51).decimal_string(51), PI_50);
    }

    #[test]
    fn pi_self_consistency() {
        let a = pi(50);
        let b = pi(60);
        assert!(a.agrees_rel(&b, 50));
        let p = pi(30);
        let inv = BigFloat::from_int(1, 35).div(&p, 35);
        let prod = p.mul(&inv, 35);
        assert!(prod.agrees_abs(&BigFloat::from_int(1, 35), 29));
    }

    #[test]
    fn arithmetic_round_trips() {
        let q = rat(-455, 8);
        let f = BigFloat::from_rat(&q, 30);
        assert_eq!(f.to_rat(), rat(-455, 8));
        let g = f.div(&BigFloat::from_int(-8, 30), 30);
        assert_eq!(g.decimal_string(6), "7.10938");
        let h = f.mul(&BigFloat::from_int(8, 30), 30);
        assert_eq!(h.to_rat(), rat(-455, 1));
    }

    #[test]
    fn roots_match_squares() {
        let two = BigFloat::from_int(2, 40);
        let r = two.sqrt(40);
        assert!(r.mul(&r, 40).agrees_abs(&two, 38));
        let x = BigFloat::from_int(145, 40);
        let c = x.nth_root(3, 40);
        assert!(c.powi(3, 40).agrees_abs(&x, 37));
    }

    #[test]
    fn rendering_handles_carries() {
        let v = BigFloat::from_rat(&rat(9_999_995, 1_000_000), 12);
        assert_eq!(v.decimal_string(6), "10.0000");
        assert_eq!(BigFloat::from_int(0, 5).sci_string(4), "0");
        let tiny = BigFloat::from_parts(Int::from(-12345), 50);
        assert_eq!(tiny.sci_string(3), "-1.23e-46");
    }

    #[test]
    fn parse_decimal_strings() {
        let v = BigFloat::parse("-3.25").unwrap();
        assert_eq!(v.to_rat(), rat(-13, 4));
        assert_eq!(BigFloat::parse("22").unwrap().to_rat(), rat(22, 1));
        assert!(BigFloat::parse("1.2e3").is_none());
        assert!(BigFloat::parse("").is_none());
        let lots = BigFloat::parse("3.14159265358979323846264338327950288419716939937510").unwrap();
        assert!(lots.agrees_abs(&pi(55), 49));
    }

    #[test]
    fn log10_magnitudes() {
        let v = BigFloat::from_int(1000, 10);
        assert!((v.log10_approx().unwrap() - 3.0).abs() < 1e-9);
        let w = BigFloat::from_parts(Int::from(5), 7);
        assert!((w.log10_approx().unwrap() + 6.3).abs() < 0.01);
        assert!(BigFloat::zero(5).log10_approx().is_none());
    }
}
