//! Declarative registry of the 1/pi series, exact term generation,
//! high-precision summation with empirical geometric tail bounds, and the
//! exact transformation from W-kernel series to Franel-kernel series.

use crate::bigfloat::BigFloat;
use crate::closedform::{self, AlgebraicExpr};
use crate::exact::{binomial, parse_rat, Int, Rat};
use crate::sequences::{f_poly, franel4, t_tri, w_poly};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("registry entry {id}: {msg}")]
    BadEntry { id: String, msg: String },
    #[error("unknown series id {0}")]
    UnknownId(String),
    #[error("term ratios for {id} did not stabilize below 0.98 within {terms} terms")]
    NonConvergent { id: String, terms: u64 },
    #[error("transform argument x={0} must avoid 0, 1, 2")]
    TransformPole(Rat),
    #[error(transparent)]
    Expr(#[from] closedform::ExprError),
    #[error("registry JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Term kernel catalog. `t_k` is the unweighted term; a series sums
/// (a k + b) t_k / base^k.
#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    /// t_k = W_k(x)
    WPoly { x: Rat },
    /// t_k = f4_k
    Franel4,
    /// t_k = C(2k,k) T_k(b1,c1) T_k(b2,c2)
    BinTrinomialPair { b1: i64, c1: i64, b2: i64, c2: i64 },
    /// t_k = C(2k,k)^2 T_k(b,c)
    BinSqTrinomial { b: i64, c: i64 },
    /// t_k = C(2k,k) F_k(x)
    BinF { x: Rat },
    /// t_k = F_k(x)
    FOnly { x: Rat },
    /// t_n = C(2n,n) sum_k x^k C(2k,k)^2 C(2(n-k),n-k)^2 / C(n,k)
    ConvRecip { x: Rat },
    /// t_n = C(2n,n) sum_k C(2k,k)^2 C(2(n-k),n-k) y^(n-k)
    Conv12 { y: Rat },
}

impl TermKind {
    /// Exact kernel value t_k.
    pub fn eval(&self, k: u64) -> Rat {
        match self {
            TermKind::WPoly { x } => w_poly(k, x),
            TermKind::Franel4 => Rat::from_integer(franel4(k)),
            TermKind::BinTrinomialPair { b1, c1, b2, c2 } => Rat::from_integer(
                binomial(2 * k, k as i64) * t_tri(k, *b1, *c1) * t_tri(k, *b2, *c2),
            ),
            TermKind::BinSqTrinomial { b, c } => {
                Rat::from_integer(binomial(2 * k, k as i64).pow(2) * t_tri(k, *b, *c))
            }
            TermKind::BinF { x } => Rat::from_integer(binomial(2 * k, k as i64)) * f_poly(k, x),
            TermKind::FOnly { x } => f_poly(k, x),
            TermKind::ConvRecip { x } => {
                let n = k;
                let mut inner = Rat::zero();
                for j in 0..=n {
                    let num = binomial(2 * j, j as i64).pow(2)
                        * binomial(2 * (n - j), (n - j) as i64).pow(2);
                    inner += x.pow(j as i32) * Rat::new(num, binomial(n, j as i64));
                }
                Rat::from_integer(binomial(2 * n, n as i64)) * inner
            }
            TermKind::Conv12 { y } => {
                let n = k;
                let mut inner = Rat::zero();
                for j in 0..=n {
                    let c = binomial(2 * j, j as i64).pow(2) * binomial(2 * (n - j), (n - j) as i64);
                    inner += Rat::from_integer(c) * y.pow((n - j) as i32);
                }
                Rat::from_integer(binomial(2 * n, n as i64)) * inner
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proven,
    Conjectural,
    Open,
}

/// One registry entry: sum_{k>=0} (a k + b) t_k / base^k = rhs.
#[derive(Debug, Clone)]
pub struct SeriesEntry {
    pub id: String,
    pub status: Status,
    pub a: i64,
    pub b: i64,
    pub base: Rat,
    pub kind: TermKind,
    pub rhs: AlgebraicExpr,
    pub rhs_text: String,
    pub label: String,
}

impl SeriesEntry {
    /// Exact value of the k-th summand (a k + b) t_k / base^k.
    pub fn term_exact(&self, k: u64) -> Rat {
        let weight = Rat::from_integer(Int::from(self.a) * Int::from(k) + Int::from(self.b));
        weight * self.kind.eval(k) * self.base.pow(-(k as i32))
    }
}

// --- JSON wire format -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct RawKind {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b1: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c1: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b2: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c2: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawEntry {
    id: String,
    status: Status,
    a: i64,
    b: i64,
    base: String,
    term_kind: RawKind,
    rhs: String,
    label: String,
}

fn parse_kind(id: &str, raw: &RawKind) -> Result<TermKind, SeriesError> {
    let bad = |msg: &str| SeriesError::BadEntry { id: id.to_string(), msg: msg.to_string() };
    let rat_field = |f: &Option<String>, name: &str| {
        f.as_deref()
            .and_then(parse_rat)
            .ok_or_else(|| bad(&format!("missing or malformed rational field '{name}'")))
    };
    Ok(match raw.name.as_str() {
        "W" => TermKind::WPoly { x: rat_field(&raw.x, "x")? },
        "F4" => TermKind::Franel4,
        "B2k_TT" => TermKind::BinTrinomialPair {
            b1: raw.b1.ok_or_else(|| bad("missing b1"))?,
            c1: raw.c1.ok_or_else(|| bad("missing c1"))?,
            b2: raw.b2.ok_or_else(|| bad("missing b2"))?,
            c2: raw.c2.ok_or_else(|| bad("missing c2"))?,
        },
        "B2k2_T" => TermKind::BinSqTrinomial {
            b: raw.b.ok_or_else(|| bad("missing b"))?,
            c: raw.c.ok_or_else(|| bad("missing c"))?,
        },
        "B2k_F" => TermKind::BinF { x: rat_field(&raw.x, "x")? },
        "F_only" => TermKind::FOnly { x: rat_field(&raw.x, "x")? },
        "B2n_conv_recip" => TermKind::ConvRecip { x: rat_field(&raw.x, "x")? },
        "B2n_conv12" => TermKind::Conv12 { y: rat_field(&raw.y, "y")? },
        other => return Err(bad(&format!("unknown term kind '{other}'"))),
    })
}

/// Parse a registry from its JSON text.
pub fn parse_registry(json: &str) -> Result<Vec<SeriesEntry>, SeriesError> {
    let raw: Vec<RawEntry> = serde_json::from_str(json)?;
    let mut out = Vec::with_capacity(raw.len());
    let mut seen = std::collections::HashSet::new();
    for r in raw {
        if !seen.insert(r.id.clone()) {
            return Err(SeriesError::BadEntry { id: r.id, msg: "duplicate id".into() });
        }
        let base = parse_rat(&r.base).ok_or_else(|| SeriesError::BadEntry {
            id: r.id.clone(),
            msg: format!("bad base '{}'", r.base),
        })?;
        if base.is_zero() {
            return Err(SeriesError::BadEntry { id: r.id, msg: "zero base".into() });
        }
        let rhs = closedform::parse_expr(&r.rhs)?;
        let kind = parse_kind(&r.id, &r.term_kind)?;
        out.push(SeriesEntry {
            id: r.id,
            status: r.status,
            a: r.a,
            b: r.b,
            base,
            kind,
            rhs,
            rhs_text: r.rhs,
            label: r.label,
        });
    }
    Ok(out)
}

/// The built-in registry shipped with the crate.
pub fn builtin_registry() -> Vec<SeriesEntry> {
    parse_registry(include_str!("../data/registry.json")).expect("builtin registry is valid")
}

pub fn find_entry<'a>(entries: &'a [SeriesEntry], id: &str) -> Result<&'a SeriesEntry, SeriesError> {
    entries.iter().find(|e| e.id == id).ok_or_else(|| SeriesError::UnknownId(id.to_string()))
}

// --- summation --------------------------------------------------------------

/// Partial sum, rigorous-if-geometric tail bound, and number of terms used.
#[derive(Debug, Clone)]
pub struct SummedSeries {
    pub value: BigFloat,
    pub tail_bound: BigFloat,
    pub terms_used: u64,
}

const MAX_TERMS: u64 = 50_000;
const RATIO_WINDOW: usize = 10;

/// Sum the series to (at least) `digits` correct decimal digits.
///
/// Terms are generated exactly and rounded once at scale digits+15. The stop
/// rule watches the magnitude peaks of two adjacent trailing windows of 10
/// terms: the per-step peak-decay ratio (inflated by 5%) must sit below 0.98,
/// and the projected geometric tail must drop under 10^-(digits+5). Peaks
/// rather than consecutive ratios keep the rule stable for kernels whose
/// term magnitudes oscillate under sign cancellation.
pub fn sum_series(entry: &SeriesEntry, digits: u32) -> Result<SummedSeries, SeriesError> {
    sum_weighted(entry, digits, None)
}

/// Same loop, overriding the (a, b) weight; used by the discovery module to
/// compute the unweighted and k-weighted base sums of a kernel.
pub fn sum_weighted(
    entry: &SeriesEntry,
    digits: u32,
    weight_override: Option<(i64, i64)>,
) -> Result<SummedSeries, SeriesError> {
    let (a, b) = weight_override.unwrap_or((entry.a, entry.b));
    if a == 0 && b == 0 {
        let scale = digits + 15;
        return Ok(SummedSeries {
            value: BigFloat::zero(scale),
            tail_bound: BigFloat::zero(scale),
            terms_used: 1,
        });
    }
    let scale = digits + 15;
    let w = RATIO_WINDOW;
    let mut sum = BigFloat::zero(scale);
    let mut mags: std::collections::VecDeque<f64> = std::collections::VecDeque::new();
    let mut diverging_windows = 0u32;
    let threshold = -(digits as f64) - 5.0;
    for k in 0..MAX_TERMS {
        let weight = Rat::from_integer(Int::from(a) * Int::from(k) + Int::from(b));
        let term = weight * entry.kind.eval(k) * entry.base.pow(-(k as i32));
        let tf = BigFloat::from_rat(&term, scale);
        sum = sum.add(&tf);
        // exactly-zero terms past the rounding floor carry no magnitude
        // information; record them at the floor so the window keeps moving
        let cur_log = tf.log10_approx().unwrap_or(threshold - 60.0);
        mags.push_back(cur_log);
        if mags.len() > 2 * w {
            mags.pop_front();
        }
        if mags.len() < 2 * w {
            continue;
        }
        let older_peak = mags.iter().take(w).cloned().fold(f64::MIN, f64::max);
        let newer_peak = mags.iter().skip(w).cloned().fold(f64::MIN, f64::max);
        let decay = (newer_peak - older_peak) / w as f64; // log10 per step
        let r = 10f64.powf(decay) * 1.05;
        if r >= 1.0 {
            // sustained growth is a data-entry red flag, not something to
            // grind through 50000 exact terms for
            diverging_windows += 1;
            if diverging_windows > 100 || cur_log > 5_000.0 {
                return Err(SeriesError::NonConvergent { id: entry.id.clone(), terms: k + 1 });
            }
            continue;
        }
        diverging_windows = 0;
        if r < 0.98 {
            // |t_{k+j}| <= peak for j < w and <= peak r^(j-w+1) beyond, so
            // tail <= peak ((w-1) + r/(1-r))
            let bound_log = newer_peak + ((w - 1) as f64 + r / (1.0 - r)).log10();
            if bound_log < threshold {
                let tail_bound = pow10_float(bound_log, scale);
                return Ok(SummedSeries { value: sum, tail_bound, terms_used: k + 1 });
            }
        }
    }
    Err(SeriesError::NonConvergent { id: entry.id.clone(), terms: MAX_TERMS })
}

/// 10^log as a BigFloat (upper estimate: exponent ceiling plus one ulp).
fn pow10_float(log: f64, scale: u32) -> BigFloat {
    let e = log.ceil() as i64;
    if e >= 0 {
        BigFloat::from_parts(Int::from(10).pow(e as u32 + 1), 0).rescale(scale)
    } else if (e.unsigned_abs() as u32) <= scale {
        BigFloat::from_parts(Int::from(10), e.unsigned_abs() as u32).rescale(scale)
    } else {
        BigFloat::from_parts(Int::one(), scale)
    }
}

/// Verification outcome for one registry entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub id: String,
    pub status: String,
    pub digits: u32,
    pub terms_used: u64,
    pub tail_bound: String,
    pub difference: String,
    pub pass: bool,
}

/// pass  <=>  |sum - rhs| + tail < 10^(5 - digits).
pub fn verify_entry(entry: &SeriesEntry, digits: u32) -> Result<VerifyReport, SeriesError> {
    let summed = sum_series(entry, digits)?;
    let rhs = closedform::eval_expr(&entry.rhs, digits + 10)?;
    let diff = summed.value.sub(&rhs).abs();
    let budget = diff.add(&summed.tail_bound);
    let pass = budget.cmp_value(&BigFloat::from_parts(
        Int::from(10u32).pow(5),
        digits,
    )) == std::cmp::Ordering::Less;
    Ok(VerifyReport {
        id: entry.id.clone(),
        status: format!("{:?}", entry.status).to_lowercase(),
        digits,
        terms_used: summed.terms_used,
        tail_bound: summed.tail_bound.sci_string(3),
        difference: diff.sci_string(3),
        pass,
    })
}

/// Verify many entries, in parallel when the feature is on.
pub fn verify_entries(entries: &[SeriesEntry], digits: u32) -> Vec<Result<VerifyReport, SeriesError>> {
    crate::par::pmap(entries.to_vec(), move |e| verify_entry(&e, digits))
}

/// Always-sequential variant for bench comparison.
pub fn verify_entries_sequential(
    entries: &[SeriesEntry],
    digits: u32,
) -> Vec<Result<VerifyReport, SeriesError>> {
    crate::par::smap(entries.to_vec(), move |e| verify_entry(&e, digits))
}

// --- the W -> Franel4 transformation ----------------------------------------

/// Output of the exact series transformation
/// sum (a k + b) W_k(1 - 1/x) / (4x)^k
///   = factor * sum (A k + B) f4_k / (4x - 4)^k.
#[derive(Debug, Clone, PartialEq)]
pub struct WToF4 {
    pub a_out: Rat,
    pub b_out: Rat,
    pub factor: Rat,
    pub new_base: Rat,
}

impl WToF4 {
    /// Normalize so the weight is a primitive integer pair with positive
    /// leading coefficient, folding the scale into the factor.
    pub fn primitive(&self) -> (Int, Int, Rat, Rat) {
        let l = self.a_out.denom().lcm(self.b_out.denom());
        let a = self.a_out.numer() * (&l / self.a_out.denom());
        let b = self.b_out.numer() * (&l / self.b_out.denom());
        let mut g = a.gcd(&b);
        if g.is_zero() {
            g = Int::one();
        }
        let mut c = Rat::new(g, l);
        if a.is_negative() {
            c = -c;
        }
        (
            (&self.a_out / &c).to_integer(),
            (&self.b_out / &c).to_integer(),
            &self.factor * &c,
            self.new_base.clone(),
        )
    }
}

/// Exact coefficient transport between the two kernels; valid analytically
/// for |x-1| >= 7.5 (a warning flag is returned outside that region).
pub fn transform_w_to_franel4(a: i64, b: i64, x: &Rat) -> Result<(WToF4, bool), SeriesError> {
    for pole in [0i64, 1, 2] {
        if x == &Rat::from_integer(Int::from(pole)) {
            return Err(SeriesError::TransformPole(x.clone()));
        }
    }
    let a = Rat::from_integer(Int::from(a));
    let b = Rat::from_integer(Int::from(b));
    let one = Rat::one();
    let two = Rat::from_integer(Int::from(2));
    let five = Rat::from_integer(Int::from(5));
    let seven = Rat::from_integer(Int::from(7));
    let ten = Rat::from_integer(Int::from(10));
    let thirteen = Rat::from_integer(Int::from(13));
    let a_out = &two * &a * x * (&five * x - &seven);
    let b_out = &a * (&ten * x - &thirteen) + &ten * &b * (x - &one) * (x - &two);
    let factor = x / (&ten * (x - &one).pow(2) * (x - &two));
    let new_base = Rat::from_integer(Int::from(4)) * x - Rat::from_integer(Int::from(4));
    // |x-1| >= 7.5  <=>  (x-1)^2 >= 56.25
    let in_region = (x - &one).pow(2) >= Rat::new(Int::from(225), Int::from(4));
    Ok((WToF4 { a_out, b_out, factor, new_base }, in_region))
}
