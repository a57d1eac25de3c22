//! Declarative congruence, quadratic-form, divisibility, and p-adic lifting
//! claims, with two independent checking engines:
//!
//! * a native Z/p^e engine (Pascal-row binomials, modular inverses of the
//!   fixed denominators) used for the sweeps, and
//! * an exact-rational engine (terms from the series kernels, reduced once at
//!   the end) that serves as the cross-check oracle and as the authoritative
//!   path for the reciprocal-binomial sums.
//!
//! Claims ship as data (JSON), so a transcription erratum means editing one
//! file rather than code.

use crate::cornacchia::represent_form;
use crate::exact::{padic_val, padic_val_int, parse_rat, Int, Rat};
use crate::modular::{
    add_mod, inv_mod, jacobi, mul_mod, reduce_rational, sub_mod, ModError, PascalMod,
};
use crate::series::TermKind;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClaimError {
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error("claims JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("claim {id}: {msg}")]
    BadClaim { id: String, msg: String },
    #[error("no prediction case applies at p={p}")]
    NoCase { p: u64 },
    #[error("{count} prediction cases apply at p={p}")]
    AmbiguousCase { p: u64, count: usize },
    #[error("case conditions hold at p={p} but no representation by x^2*{a}+y^2*{d} exists")]
    RepresentationNotFound { p: u64, a: u64, d: u64 },
    #[error("pn = {pn} exceeds the lift cost cap {cap}")]
    CostCap { pn: u64, cap: u64 },
    #[error("prediction expression: {0}")]
    Expr(String),
}

// ---------------------------------------------------------------------------
// prediction expression mini-grammar: rationals, p, x, J(D), Q(t,r), + - * /

#[derive(Debug, Clone, PartialEq)]
pub enum PredExpr {
    Lit(Rat),
    P,
    X,
    /// Jacobi symbol (D/p).
    Jac(i64),
    /// t^((p-r)/4).
    Quartic(i64, i64),
    Add(Box<PredExpr>, Box<PredExpr>),
    Sub(Box<PredExpr>, Box<PredExpr>),
    Mul(Box<PredExpr>, Box<PredExpr>),
    Div(Box<PredExpr>, Box<PredExpr>),
    Neg(Box<PredExpr>),
}

struct PredParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PredParser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ClaimError> {
        Err(ClaimError::Expr(format!("at byte {}: {msg}", self.pos)))
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_int(&mut self) -> Result<i64, ClaimError> {
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected integer");
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
        Ok(if neg { -v } else { v })
    }

    fn parse_atom(&mut self) -> Result<PredExpr, ClaimError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(PredExpr::Neg(Box::new(self.parse_atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_sum()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_int()?;
                Ok(PredExpr::Lit(Rat::from_integer(Int::from(n))))
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(PredExpr::P)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(PredExpr::X)
            }
            Some(b'J') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return self.err("expected '(' after J");
                }
                let d = self.parse_int()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(PredExpr::Jac(d))
            }
            Some(b'Q') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return self.err("expected '(' after Q");
                }
                let t = self.parse_int()?;
                if !self.eat(b',') {
                    return self.err("expected ','");
                }
                let r = self.parse_int()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(PredExpr::Quartic(t, r))
            }
            _ => self.err("expected atom"),
        }
    }

    fn parse_term(&mut self) -> Result<PredExpr, ClaimError> {
        let mut acc = self.parse_atom()?;
        loop {
            if self.eat(b'*') {
                acc = PredExpr::Mul(Box::new(acc), Box::new(self.parse_atom()?));
            } else if self.eat(b'/') {
                acc = PredExpr::Div(Box::new(acc), Box::new(self.parse_atom()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_sum(&mut self) -> Result<PredExpr, ClaimError> {
        let mut acc = self.parse_term()?;
        loop {
            if self.eat(b'+') {
                acc = PredExpr::Add(Box::new(acc), Box::new(self.parse_term()?));
            } else if self.eat(b'-') {
                acc = PredExpr::Sub(Box::new(acc), Box::new(self.parse_term()?));
            } else {
                return Ok(acc);
            }
        }
    }
}

pub fn parse_pred(text: &str) -> Result<PredExpr, ClaimError> {
    let mut p = PredParser { src: text.as_bytes(), pos: 0 };
    let e = p.parse_sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl PredExpr {
    /// Exact rational value given p and (optionally) a Cornacchia x.
    pub fn eval(&self, p: u64, x: Option<u64>) -> Result<Rat, ClaimError> {
        Ok(match self {
            PredExpr::Lit(q) => q.clone(),
            PredExpr::P => Rat::from_integer(Int::from(p)),
            PredExpr::X => Rat::from_integer(Int::from(
                x.ok_or_else(|| ClaimError::Expr("x outside a form case".into()))?,
            )),
            PredExpr::Jac(d) => Rat::from_integer(Int::from(jacobi(*d, p)?)),
            PredExpr::Quartic(t, r) => {
                let e = (p as i64 - r) / 4;
                if (p as i64 - r) % 4 != 0 || e < 0 {
                    return Err(ClaimError::Expr(format!(
                        "quartic exponent (p-{r})/4 not a nonnegative integer at p={p}"
                    )));
                }
                Rat::from_integer(Int::from(*t).pow(e as u32))
            }
            PredExpr::Add(a, b) => a.eval(p, x)? + b.eval(p, x)?,
            PredExpr::Sub(a, b) => a.eval(p, x)? - b.eval(p, x)?,
            PredExpr::Mul(a, b) => a.eval(p, x)? * b.eval(p, x)?,
            PredExpr::Div(a, b) => {
                let d = b.eval(p, x)?;
                if d.is_zero() {
                    return Err(ClaimError::Expr("division by zero".into()));
                }
                a.eval(p, x)? / d
            }
            PredExpr::Neg(a) => -a.eval(p, x)?,
        })
    }
}

// ---------------------------------------------------------------------------
// conditions

/// Conjunction of congruence-class and Jacobi-symbol requirements on p.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cond {
    /// p mod N lies in the listed set.
    #[serde(default, rename = "mod", skip_serializing_if = "Option::is_none")]
    pub modcase: Option<(u64, Vec<u64>)>,
    /// (D/p) = s for each (D, s).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bot: Vec<(i64, i32)>,
    /// (p/q) = s for each (q, s).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub top: Vec<(u64, i32)>,
    /// p equals this prime exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_eq: Option<u64>,
    /// p differs from every listed prime.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_ne: Vec<u64>,
}

impl Cond {
    pub fn holds(&self, p: u64) -> Result<bool, ClaimError> {
        if let Some(q) = self.p_eq {
            if p != q {
                return Ok(false);
            }
        }
        if self.p_ne.contains(&p) {
            return Ok(false);
        }
        if let Some((n, set)) = &self.modcase {
            if !set.contains(&(p % n)) {
                return Ok(false);
            }
        }
        for (d, s) in &self.bot {
            if jacobi(*d, p)? != *s {
                return Ok(false);
            }
        }
        for (q, s) in &self.top {
            if jacobi(p as i64, *q)? != *s {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// claim schema

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawSumSpec {
    pub term_kind: serde_json::Value,
    pub a: i64,
    pub b: i64,
    pub base: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCase {
    #[serde(default)]
    pub cond: Cond,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>, // "p" | "2p"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<(u64, u64)>, // (A, d): target = A x^2 + d y^2
    pub expr: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawClaim {
    pub id: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum: Option<RawSumSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction: Option<serde_json::Value>, // {cases: [RawCase]}
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond: Option<Cond>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternating: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor_central: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default)]
    pub excluded: Vec<u64>,
    #[serde(default)]
    pub flagged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Weighted truncated sum description: sum (a k + b) t_k / base^k.
#[derive(Debug, Clone)]
pub struct SumSpec {
    pub kind: TermKind,
    pub a: i64,
    pub b: i64,
    pub base: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorKind {
    N,
    FourN,
    SixN,
    NCentral,
    TwoNCentral,
    FourNCentral,
    NCentralShift, // n * C(2n-1, n-1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityRule {
    None,
    OddIffPowerOfTwo,
    OddIffPowerOfTwoPlusOne,
    AlwaysFiveMod8,
}

#[derive(Debug, Clone)]
pub struct PredCase {
    pub cond: Cond,
    pub target_two_p: bool,
    pub form: Option<(u64, u64)>,
    pub expr: PredExpr,
    pub expr_text: String,
}

#[derive(Debug, Clone)]
pub enum ClaimKind {
    /// sum_{k<p} = prediction (mod p^e)
    Congruence { e: u8, cases: Vec<PredCase> },
    /// twist * sum_{k<p} = case value (mod p^2), case keyed by symbols
    QuadForm { twist: Option<i64>, cases: Vec<PredCase> },
    /// c^(n-1) sum_{k<n} (a k + b) (+-1)^k m^(n-1-k) t_k is a positive
    /// integer obeying the parity rule
    Divisibility {
        pre_c: Rat,
        alternating: bool,
        divisor: DivisorKind,
        parity: ParityRule,
        n_min: u64,
    },
    /// sum_{k<pn} u_k - eps(p) p sum_{k<n} u_k divisible by (pn)^2 [C(2n,n)]
    Lift { cond: Cond, twist: Option<i64>, divisor_central: bool },
    /// sum_{k<p} W_k(1-1/x)/(4x)^k = sum_{k<p} S_k(4x-4) (mod p^e)
    Relation31 { x: Rat, e: u8 },
}

#[derive(Debug, Clone)]
pub struct Claim {
    pub id: String,
    pub sum: Option<SumSpec>,
    pub excluded: Vec<u64>,
    pub flagged: bool,
    pub note: Option<String>,
    pub kind: ClaimKind,
}

fn parse_term_kind_value(id: &str, v: &serde_json::Value) -> Result<TermKind, ClaimError> {
    let bad = |msg: String| ClaimError::BadClaim { id: id.to_string(), msg };
    let name = v.get("name").and_then(|n| n.as_str()).ok_or_else(|| bad("term_kind.name missing".into()))?;
    let rat_field = |f: &str| -> Result<Rat, ClaimError> {
        v.get(f)
            .and_then(|x| x.as_str())
            .and_then(parse_rat)
            .ok_or_else(|| bad(format!("term_kind field '{f}' missing or malformed")))
    };
    let int_field = |f: &str| -> Result<i64, ClaimError> {
        v.get(f).and_then(|x| x.as_i64()).ok_or_else(|| bad(format!("term_kind field '{f}' missing")))
    };
    Ok(match name {
        "W" => TermKind::WPoly { x: rat_field("x")? },
        "F4" => TermKind::Franel4,
        "B2k_TT" => TermKind::BinTrinomialPair {
            b1: int_field("b1")?,
            c1: int_field("c1")?,
            b2: int_field("b2")?,
            c2: int_field("c2")?,
        },
        "B2k2_T" => TermKind::BinSqTrinomial { b: int_field("b")?, c: int_field("c")? },
        "B2k_F" => TermKind::BinF { x: rat_field("x")? },
        "F_only" => TermKind::FOnly { x: rat_field("x")? },
        "B2n_conv_recip" => TermKind::ConvRecip { x: rat_field("x")? },
        "B2n_conv12" => TermKind::Conv12 { y: rat_field("y")? },
        other => return Err(bad(format!("unknown term kind '{other}'"))),
    })
}

fn parse_cases(id: &str, prediction: &serde_json::Value) -> Result<Vec<PredCase>, ClaimError> {
    let bad = |msg: &str| ClaimError::BadClaim { id: id.to_string(), msg: msg.to_string() };
    let cases = prediction.get("cases").and_then(|c| c.as_array()).ok_or_else(|| bad("prediction.cases missing"))?;
    let mut out = Vec::with_capacity(cases.len());
    for c in cases {
        let raw: RawCase = serde_json::from_value(c.clone())?;
        let target_two_p = match raw.target.as_deref() {
            None | Some("p") => false,
            Some("2p") => true,
            Some(other) => return Err(bad(&format!("bad target '{other}'"))),
        };
        out.push(PredCase {
            cond: raw.cond,
            target_two_p,
            form: raw.form,
            expr: parse_pred(&raw.expr)?,
            expr_text: raw.expr,
        });
    }
    Ok(out)
}

pub fn parse_claims(json: &str) -> Result<Vec<Claim>, ClaimError> {
    let raws: Vec<RawClaim> = serde_json::from_str(json)?;
    let mut out = Vec::with_capacity(raws.len());
    let mut seen = std::collections::HashSet::new();
    for raw in raws {
        let id = raw.id.clone();
        if !seen.insert(id.clone()) {
            return Err(ClaimError::BadClaim { id, msg: "duplicate id".into() });
        }
        let bad = |msg: &str| ClaimError::BadClaim { id: id.clone(), msg: msg.to_string() };
        let sum = match &raw.sum {
            Some(s) => Some(SumSpec {
                kind: parse_term_kind_value(&id, &s.term_kind)?,
                a: s.a,
                b: s.b,
                base: parse_rat(&s.base).ok_or_else(|| bad("bad base"))?,
            }),
            None => None,
        };
        let kind = match raw.kind.as_str() {
            "congruence" => ClaimKind::Congruence {
                e: raw.e.unwrap_or(2),
                cases: parse_cases(&id, raw.prediction.as_ref().ok_or_else(|| bad("missing prediction"))?)?,
            },
            "quadform" => ClaimKind::QuadForm {
                twist: raw.twist,
                cases: parse_cases(&id, raw.prediction.as_ref().ok_or_else(|| bad("missing prediction"))?)?,
            },
            "divisibility" => ClaimKind::Divisibility {
                pre_c: raw.pre_c.as_deref().and_then(parse_rat).unwrap_or_else(Rat::one),
                alternating: raw.alternating.unwrap_or(false),
                divisor: match raw.divisor.as_deref() {
                    Some("n") => DivisorKind::N,
                    Some("4n") => DivisorKind::FourN,
                    Some("6n") => DivisorKind::SixN,
                    Some("nC") => DivisorKind::NCentral,
                    Some("2nC") => DivisorKind::TwoNCentral,
                    Some("4nC") => DivisorKind::FourNCentral,
                    Some("nC1") => DivisorKind::NCentralShift,
                    other => return Err(bad(&format!("bad divisor {other:?}"))),
                },
                parity: match raw.parity.as_deref() {
                    None | Some("none") => ParityRule::None,
                    Some("pow2") => ParityRule::OddIffPowerOfTwo,
                    Some("pow2plus1") => ParityRule::OddIffPowerOfTwoPlusOne,
                    Some("mod8is5") => ParityRule::AlwaysFiveMod8,
                    Some(other) => return Err(bad(&format!("bad parity '{other}'"))),
                },
                n_min: raw.n_min.unwrap_or(1),
            },
            "lift" => ClaimKind::Lift {
                cond: raw.cond.clone().unwrap_or_default(),
                twist: raw.twist,
                divisor_central: raw.divisor_central.unwrap_or(false),
            },
            "relation31" => ClaimKind::Relation31 {
                x: raw.x.as_deref().and_then(parse_rat).ok_or_else(|| bad("missing x"))?,
                e: raw.e.unwrap_or(1),
            },
            other => return Err(bad(&format!("unknown kind '{other}'"))),
        };
        if matches!(kind, ClaimKind::Congruence { .. } | ClaimKind::QuadForm { .. } | ClaimKind::Lift { .. })
            && sum.is_none()
        {
            return Err(bad("claim kind requires a sum"));
        }
        if matches!(kind, ClaimKind::Divisibility { .. }) && sum.is_none() {
            return Err(bad("divisibility claim requires a sum"));
        }
        out.push(Claim { id, sum, excluded: raw.excluded, flagged: raw.flagged, note: raw.note, kind });
    }
    Ok(out)
}

/// The built-in claims file shipped with the crate.
pub fn builtin_claims() -> Vec<Claim> {
    parse_claims(include_str!("../data/claims.json")).expect("builtin claims are valid")
}

// ---------------------------------------------------------------------------
// native Z/p^e engine

/// Pascal rows needed to evaluate `terms` terms of the kind.
fn rows_needed(kind: &TermKind, terms: u64) -> usize {
    let k = terms.saturating_sub(1) as usize;
    match kind {
        TermKind::Franel4 => k,
        TermKind::BinF { .. } | TermKind::FOnly { .. } => 3 * k,
        _ => 2 * k,
    }
}

struct PowTable {
    pows: Vec<u64>,
}

impl PowTable {
    fn build(base: u64, len: usize, m: u64) -> Self {
        let mut pows = Vec::with_capacity(len + 1);
        pows.push(1 % m);
        for i in 0..len {
            pows.push(mul_mod(pows[i], base, m));
        }
        PowTable { pows }
    }

    fn at(&self, i: usize) -> u64 {
        self.pows[i]
    }
}

fn reduce_i64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// Reduce a rational's numerator and the inverse of its denominator.
fn split_rat(q: &Rat, m: u64) -> Result<(u64, u64, u64), ModError> {
    let num = crate::modular::reduce_int(q.numer(), m);
    let den = crate::modular::reduce_int(q.denom(), m);
    Ok((num, den, inv_mod(den, m)?))
}

/// Native modular evaluation context for one (prime power, term budget).
pub struct ModSumCtx {
    pub m: u64,
    pascal: PascalMod,
}

impl ModSumCtx {
    pub fn build(m: u64, rows: usize) -> Self {
        ModSumCtx { m, pascal: PascalMod::build(rows, m) }
    }

    fn central(&self, k: usize) -> u64 {
        self.pascal.central(k)
    }

    /// T_k(b, c) mod m.
    fn trinomial(&self, k: u64, pow_b: &PowTable, pow_c: &PowTable) -> u64 {
        let m = self.m;
        let mut acc = 0u64;
        for i in 0..=(k / 2) as usize {
            let t = mul_mod(self.pascal.choose(k as usize, 2 * i as i64), self.central(i), m);
            let t = mul_mod(t, pow_b.at(k as usize - 2 * i), m);
            acc = add_mod(acc, mul_mod(t, pow_c.at(i), m), m);
        }
        acc
    }
}

/// sum_{k<terms} (a k + b) t_k / base^k (mod m), entirely in Z/m.
pub fn sum_mod_native(spec: &SumSpec, m: u64, terms: u64) -> Result<u64, ModError> {
    let ctx = ModSumCtx::build(m, rows_needed(&spec.kind, terms));
    sum_mod_with_ctx(spec, &ctx, terms)
}

pub fn sum_mod_with_ctx(spec: &SumSpec, ctx: &ModSumCtx, terms: u64) -> Result<u64, ModError> {
    let m = ctx.m;
    let kmax = terms.saturating_sub(1) as usize;
    // base^{-k}: base = u/v -> w = v * u^{-1}
    let (bu, bv, _) = split_rat(&spec.base, m)?;
    let w = mul_mod(bv, inv_mod(bu, m)?, m);
    let pow_w = PowTable::build(w, kmax, m);

    // kernel-specific tables
    enum Prep {
        W { pow_r: PowTable, pow_s: PowTable, pow_inv_s: PowTable },
        F4,
        TT { pb1: PowTable, pc1: PowTable, pb2: PowTable, pc2: PowTable },
        SqT { pb: PowTable, pc: PowTable },
        F { pow_r: PowTable, pow_s: PowTable, pow_inv_s: PowTable },
        Recip { pow_xr: PowTable, pow_inv_xs: PowTable },
        Conv { pow_yr: PowTable, pow_inv_ys: PowTable },
    }
    let prep = match &spec.kind {
        TermKind::WPoly { x } | TermKind::BinF { x } | TermKind::FOnly { x } => {
            let (r, s, inv_s) = split_rat(x, m)?;
            let p = (PowTable::build(r, kmax, m), PowTable::build(s, kmax, m), PowTable::build(inv_s, kmax, m));
            if matches!(spec.kind, TermKind::WPoly { .. }) {
                Prep::W { pow_r: p.0, pow_s: p.1, pow_inv_s: p.2 }
            } else {
                Prep::F { pow_r: p.0, pow_s: p.1, pow_inv_s: p.2 }
            }
        }
        TermKind::Franel4 => Prep::F4,
        TermKind::BinTrinomialPair { b1, c1, b2, c2 } => Prep::TT {
            pb1: PowTable::build(reduce_i64(*b1, m), kmax, m),
            pc1: PowTable::build(reduce_i64(*c1, m), kmax, m),
            pb2: PowTable::build(reduce_i64(*b2, m), kmax, m),
            pc2: PowTable::build(reduce_i64(*c2, m), kmax, m),
        },
        TermKind::BinSqTrinomial { b, c } => Prep::SqT {
            pb: PowTable::build(reduce_i64(*b, m), kmax, m),
            pc: PowTable::build(reduce_i64(*c, m), kmax, m),
        },
        TermKind::ConvRecip { x } => {
            let (r, s, inv_s) = split_rat(x, m)?;
            let _ = s;
            Prep::Recip { pow_xr: PowTable::build(r, kmax, m), pow_inv_xs: PowTable::build(inv_s, kmax, m) }
        }
        TermKind::Conv12 { y } => {
            let (r, s, inv_s) = split_rat(y, m)?;
            let _ = s;
            Prep::Conv { pow_yr: PowTable::build(r, kmax, m), pow_inv_ys: PowTable::build(inv_s, kmax, m) }
        }
    };

    let mut acc = 0u64;
    for k in 0..terms {
        let ku = k as usize;
        let kernel = match &prep {
            Prep::W { pow_r, pow_s, pow_inv_s } => {
                // W_k(r/s) = s^{-k} sum_j C(k,j) C(k+j,j) C(2j,j) C(2(k-j),k-j) r^j s^{k-j}
                let mut inner = 0u64;
                for j in 0..=ku {
                    let mut t = mul_mod(
                        ctx.pascal.choose(ku, j as i64),
                        ctx.pascal.choose(ku + j, j as i64),
                        m,
                    );
                    t = mul_mod(t, ctx.central(j), m);
                    t = mul_mod(t, ctx.central(ku - j), m);
                    t = mul_mod(t, pow_r.at(j), m);
                    t = mul_mod(t, pow_s.at(ku - j), m);
                    inner = add_mod(inner, t, m);
                }
                mul_mod(inner, pow_inv_s.at(ku), m)
            }
            Prep::F4 => {
                let mut inner = 0u64;
                for j in 0..=ku {
                    let c = ctx.pascal.choose(ku, j as i64);
                    let c2 = mul_mod(c, c, m);
                    inner = add_mod(inner, mul_mod(c2, c2, m), m);
                }
                inner
            }
            Prep::TT { pb1, pc1, pb2, pc2 } => {
                let t = mul_mod(ctx.trinomial(k, pb1, pc1), ctx.trinomial(k, pb2, pc2), m);
                mul_mod(ctx.central(ku), t, m)
            }
            Prep::SqT { pb, pc } => {
                let c = ctx.central(ku);
                mul_mod(mul_mod(c, c, m), ctx.trinomial(k, pb, pc), m)
            }
            Prep::F { pow_r, pow_s, pow_inv_s } => {
                // F_k(r/s) = s^{-k} sum_j C(k,j) C(k+2j,2j) C(2j,j) r^{k-j} s^{j}
                let mut inner = 0u64;
                for j in 0..=ku {
                    let mut t = mul_mod(
                        ctx.pascal.choose(ku, j as i64),
                        ctx.pascal.choose(ku + 2 * j, (2 * j) as i64),
                        m,
                    );
                    t = mul_mod(t, ctx.central(j), m);
                    t = mul_mod(t, pow_r.at(ku - j), m);
                    t = mul_mod(t, pow_s.at(j), m);
                    inner = add_mod(inner, t, m);
                }
                let f = mul_mod(inner, pow_inv_s.at(ku), m);
                if matches!(spec.kind, TermKind::BinF { .. }) {
                    mul_mod(ctx.central(ku), f, m)
                } else {
                    f
                }
            }
            Prep::Recip { pow_xr, pow_inv_xs } => {
                let n = ku;
                let mut inner = 0u64;
                for j in 0..=n {
                    let cj = ctx.central(j);
                    let cnj = ctx.central(n - j);
                    let mut t = mul_mod(mul_mod(cj, cj, m), mul_mod(cnj, cnj, m), m);
                    t = mul_mod(t, inv_mod(ctx.pascal.choose(n, j as i64), m)?, m);
                    t = mul_mod(t, pow_xr.at(j), m);
                    inner = add_mod(inner, mul_mod(t, pow_inv_xs.at(j), m), m);
                }
                mul_mod(ctx.central(n), inner, m)
            }
            Prep::Conv { pow_yr, pow_inv_ys } => {
                let n = ku;
                let mut inner = 0u64;
                for j in 0..=n {
                    let cj = ctx.central(j);
                    let mut t = mul_mod(mul_mod(cj, cj, m), ctx.central(n - j), m);
                    t = mul_mod(t, pow_yr.at(n - j), m);
                    inner = add_mod(inner, mul_mod(t, pow_inv_ys.at(n - j), m), m);
                }
                mul_mod(ctx.central(n), inner, m)
            }
        };
        let weight = reduce_i64(spec.a.wrapping_mul(k as i64).wrapping_add(spec.b), m);
        acc = add_mod(acc, mul_mod(mul_mod(weight, kernel, m), pow_w.at(ku), m), m);
    }
    Ok(acc)
}

/// Exact rational partial sum of the same quantity.
pub fn sum_exact(spec: &SumSpec, terms: u64) -> Rat {
    let mut acc = Rat::zero();
    for k in 0..terms {
        let weight = Rat::from_integer(Int::from(spec.a) * Int::from(k) + Int::from(spec.b));
        acc += weight * spec.kind.eval(k) * spec.base.pow(-(k as i32));
    }
    acc
}

/// S_k(y) partial sums mod m: sum_{k<terms} S_k(y).
fn sum_s_poly_mod(y: &Rat, m: u64, terms: u64) -> Result<u64, ModError> {
    let kmax = terms.saturating_sub(1) as usize;
    let pascal = PascalMod::build(kmax, m);
    let (r, _s, inv_s) = split_rat(y, m)?;
    let pow_r = PowTable::build(r, kmax, m);
    let pow_inv_s = PowTable::build(inv_s, kmax, m);
    let mut acc = 0u64;
    for k in 0..terms as usize {
        let mut inner = 0u64;
        for j in 0..=k {
            let c = pascal.choose(k, j as i64);
            let c2 = mul_mod(c, c, m);
            let c4 = mul_mod(c2, c2, m);
            // y^j = r^j s^{-j}
            inner = add_mod(inner, mul_mod(c4, mul_mod(pow_r.at(j), pow_inv_s.at(j), m), m), m);
        }
        acc = add_mod(acc, inner, m);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// outcomes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One record of a (claim, prime[, n]) check, ready for JSON-lines output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Outcome {
    pub claim: String,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub flagged: bool,
}

impl Outcome {
    fn skip(claim: &Claim, p: u64, why: impl Into<String>) -> Self {
        Outcome {
            claim: claim.id.clone(),
            p,
            n: None,
            status: Status::Skip,
            lhs: None,
            rhs: None,
            detail: Some(why.into()),
            flagged: claim.flagged,
        }
    }
}

fn admissible(claim: &Claim, p: u64) -> bool {
    !claim.excluded.contains(&p)
}

// ---------------------------------------------------------------------------
// checkers

/// Exact residue of the claim's sum mod p^e. The reciprocal-binomial kind is
/// handled by the exact path (the authoritative route for it); every other
/// kind runs natively in Z/p^e.
pub fn sum_mod(spec: &SumSpec, p: u64, e: u8, terms: u64) -> Result<u64, ModError> {
    let m = p.pow(e as u32);
    if matches!(spec.kind, TermKind::ConvRecip { .. }) {
        let exact = sum_exact(spec, terms);
        return Ok(reduce_rational(&exact, m)?.value);
    }
    sum_mod_native(spec, m, terms)
}

/// Congruence claim at one prime.
pub fn check_congruence(claim: &Claim, p: u64) -> Result<Outcome, ClaimError> {
    let ClaimKind::Congruence { e, cases } = &claim.kind else {
        return Err(ClaimError::BadClaim { id: claim.id.clone(), msg: "not a congruence claim".into() });
    };
    if !admissible(claim, p) {
        return Ok(Outcome::skip(claim, p, "excluded prime"));
    }
    let spec = claim.sum.as_ref().unwrap();
    let m = p.pow(*e as u32);
    let lhs = match sum_mod(spec, p, *e, p) {
        Ok(v) => v,
        Err(ModError::NonInvertibleDenominator { denom, modulus }) => {
            return Ok(Outcome::skip(claim, p, format!("non-invertible denominator {denom} mod {modulus}")));
        }
        Err(e) => return Err(e.into()),
    };
    let mut hits = cases.iter().filter(|c| c.cond.holds(p).unwrap_or(false)).collect::<Vec<_>>();
    if hits.is_empty() {
        return Err(ClaimError::NoCase { p });
    }
    if hits.len() > 1 {
        return Err(ClaimError::AmbiguousCase { p, count: hits.len() });
    }
    let case = hits.remove(0);
    let rhs_exact = case.expr.eval(p, None)?;
    let rhs = reduce_rational(&rhs_exact, m)?.value;
    let status = if lhs == rhs { Status::Pass } else { Status::Fail };
    Ok(Outcome {
        claim: claim.id.clone(),
        p,
        n: None,
        status,
        lhs: Some(lhs.to_string()),
        rhs: Some(format!("{rhs} [{}]", case.expr_text)),
        detail: None,
        flagged: claim.flagged,
    })
}

/// Quadratic-form claim at one prime.
pub fn check_quadform(claim: &Claim, p: u64) -> Result<Outcome, ClaimError> {
    let ClaimKind::QuadForm { twist, cases } = &claim.kind else {
        return Err(ClaimError::BadClaim { id: claim.id.clone(), msg: "not a quadform claim".into() });
    };
    if !admissible(claim, p) {
        return Ok(Outcome::skip(claim, p, "excluded prime"));
    }
    let spec = claim.sum.as_ref().unwrap();
    let m = p * p;
    let mut lhs = match sum_mod(spec, p, 2, p) {
        Ok(v) => v,
        Err(ModError::NonInvertibleDenominator { denom, modulus }) => {
            return Ok(Outcome::skip(claim, p, format!("non-invertible denominator {denom} mod {modulus}")));
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(d) = twist {
        match jacobi(*d, p)? {
            1 => {}
            -1 => lhs = sub_mod(0, lhs, m),
            _ => return Ok(Outcome::skip(claim, p, "twist symbol vanishes")),
        }
    }
    let hits = cases
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cond.holds(p).unwrap_or(false))
        .collect::<Vec<_>>();
    if hits.is_empty() {
        return Err(ClaimError::NoCase { p });
    }
    if hits.len() > 1 {
        return Err(ClaimError::AmbiguousCase { p, count: hits.len() });
    }
    let (_, case) = hits[0];
    let x = match &case.form {
        Some((a_coef, d)) => {
            let target = if case.target_two_p { 2 * p } else { p };
            match represent_form(*a_coef, *d, target, p) {
                Some((x, _y)) => Some(x),
                None => {
                    return Err(ClaimError::RepresentationNotFound { p, a: *a_coef, d: *d });
                }
            }
        }
        None => None,
    };
    let rhs_exact = case.expr.eval(p, x)?;
    let rhs = reduce_rational(&rhs_exact, m)?.value;
    let status = if lhs == rhs { Status::Pass } else { Status::Fail };
    Ok(Outcome {
        claim: claim.id.clone(),
        p,
        n: None,
        status,
        lhs: Some(lhs.to_string()),
        rhs: Some(format!("{rhs} [{}{}]", case.expr_text, x.map(|x| format!(", x={x}")).unwrap_or_default())),
        detail: None,
        flagged: claim.flagged,
    })
}

fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Divisibility/positivity/parity claim at one index n.
pub fn check_divisibility(claim: &Claim, n: u64) -> Result<Outcome, ClaimError> {
    let ClaimKind::Divisibility { pre_c, alternating, divisor, parity, n_min } = &claim.kind else {
        return Err(ClaimError::BadClaim { id: claim.id.clone(), msg: "not a divisibility claim".into() });
    };
    let mk = |status: Status, lhs: String, detail: Option<String>| Outcome {
        claim: claim.id.clone(),
        p: 0,
        n: Some(n),
        status,
        lhs: Some(lhs),
        rhs: None,
        detail,
        flagged: claim.flagged,
    };
    if n < *n_min {
        return Ok(mk(Status::Skip, String::new(), Some(format!("n below n_min={n_min}"))));
    }
    let spec = claim.sum.as_ref().unwrap();
    // c^(n-1) sum_{k<n} (a k + b) (+-1)^k m^(n-1-k) t_k
    let mut sum = Rat::zero();
    for k in 0..n {
        let weight = Rat::from_integer(Int::from(spec.a) * Int::from(k) + Int::from(spec.b));
        let sign = if *alternating && k % 2 == 1 { -Rat::one() } else { Rat::one() };
        sum += weight * sign * spec.kind.eval(k) * spec.base.pow((n - 1 - k) as i32);
    }
    let value = pre_c.pow(n as i32 - 1) * sum;
    let divisor_value = match divisor {
        DivisorKind::N => Rat::from_integer(Int::from(n)),
        DivisorKind::FourN => Rat::from_integer(Int::from(4 * n)),
        DivisorKind::SixN => Rat::from_integer(Int::from(6 * n)),
        DivisorKind::NCentral => Rat::from_integer(Int::from(n) * crate::exact::binomial(2 * n, n as i64)),
        DivisorKind::TwoNCentral => {
            Rat::from_integer(Int::from(2 * n) * crate::exact::binomial(2 * n, n as i64))
        }
        DivisorKind::FourNCentral => {
            Rat::from_integer(Int::from(4 * n) * crate::exact::binomial(2 * n, n as i64))
        }
        DivisorKind::NCentralShift => {
            Rat::from_integer(Int::from(n) * crate::exact::binomial(2 * n - 1, n as i64 - 1))
        }
    };
    let q = value / divisor_value;
    if !q.is_integer() || !q.is_positive() {
        return Ok(mk(Status::Fail, format!("{q}"), Some("not a positive integer".into())));
    }
    let v = q.to_integer();
    let parity_ok = match parity {
        ParityRule::None => true,
        ParityRule::OddIffPowerOfTwo => v.is_odd() == is_power_of_two(n),
        ParityRule::OddIffPowerOfTwoPlusOne => v.is_odd() == (n >= 2 && is_power_of_two(n - 1)),
        ParityRule::AlwaysFiveMod8 => {
            crate::modular::reduce_int(&v, 8) == 5
        }
    };
    if parity_ok {
        Ok(mk(Status::Pass, v.to_string(), None))
    } else {
        Ok(mk(Status::Fail, v.to_string(), Some("parity rule violated".into())))
    }
}

pub const LIFT_COST_CAP: u64 = 1024;

/// p-adic lifting claim at one (p, n).
pub fn check_lift(claim: &Claim, p: u64, n: u64) -> Result<Outcome, ClaimError> {
    let ClaimKind::Lift { cond, twist, divisor_central } = &claim.kind else {
        return Err(ClaimError::BadClaim { id: claim.id.clone(), msg: "not a lift claim".into() });
    };
    let mk = |status: Status, detail: Option<String>| Outcome {
        claim: claim.id.clone(),
        p,
        n: Some(n),
        status,
        lhs: None,
        rhs: None,
        detail,
        flagged: claim.flagged,
    };
    if !admissible(claim, p) {
        return Ok(mk(Status::Skip, Some("excluded prime".into())));
    }
    if !cond.holds(p)? {
        return Ok(mk(Status::Skip, Some("applicability condition fails".into())));
    }
    let pn = p.checked_mul(n).filter(|&pn| pn <= LIFT_COST_CAP).ok_or(ClaimError::CostCap {
        pn: p.saturating_mul(n),
        cap: LIFT_COST_CAP,
    })?;
    let spec = claim.sum.as_ref().unwrap();
    let eps = match twist {
        None => 1,
        Some(d) => jacobi(*d, p)?,
    };
    if eps == 0 {
        return Ok(mk(Status::Skip, Some("twist symbol vanishes".into())));
    }
    let big = sum_exact(spec, pn);
    let small = sum_exact(spec, n);
    let delta = big - Rat::from_integer(Int::from(eps) * Int::from(p)) * small;
    let mut need = 2 * (1 + padic_val_int(&Int::from(n), p));
    if *divisor_central {
        need += padic_val_int(&crate::exact::binomial(2 * n, n as i64), p);
    }
    let ok = delta.is_zero() || padic_val(&delta, p).unwrap() >= need;
    Ok(Outcome {
        claim: claim.id.clone(),
        p,
        n: Some(n),
        status: if ok { Status::Pass } else { Status::Fail },
        lhs: Some(if delta.is_zero() {
            "v_p(0) = inf".to_string()
        } else {
            format!("v_p = {}", padic_val(&delta, p).unwrap())
        }),
        rhs: Some(format!("need >= {need}")),
        detail: None,
        flagged: claim.flagged,
    })
}

/// W-vs-S truncated-sum relation at one prime.
pub fn check_relation31(claim: &Claim, p: u64) -> Result<Outcome, ClaimError> {
    let ClaimKind::Relation31 { x, e } = &claim.kind else {
        return Err(ClaimError::BadClaim { id: claim.id.clone(), msg: "not a relation claim".into() });
    };
    if !admissible(claim, p) {
        return Ok(Outcome::skip(claim, p, "excluded prime"));
    }
    if p == 2 {
        return Ok(Outcome::skip(claim, p, "odd primes only"));
    }
    let m = p.pow(*e as u32);
    // x must be a p-adic unit
    if crate::modular::reduce_int(x.numer(), p) == 0 || crate::modular::reduce_int(x.denom(), p) == 0 {
        return Ok(Outcome::skip(claim, p, "x not a p-adic unit"));
    }
    let one = Rat::one();
    let four = Rat::from_integer(Int::from(4));
    let w_arg = &one - &one / x; // 1 - 1/x
    let w_base = &four * x;
    let spec = SumSpec { kind: TermKind::WPoly { x: w_arg }, a: 0, b: 1, base: w_base };
    let lhs = match sum_mod_native(&spec, m, p) {
        Ok(v) => v,
        Err(ModError::NonInvertibleDenominator { denom, modulus }) => {
            return Ok(Outcome::skip(claim, p, format!("non-invertible denominator {denom} mod {modulus}")));
        }
        Err(e) => return Err(e.into()),
    };
    let y = &four * x - &four;
    let rhs = sum_s_poly_mod(&y, m, p)?;
    Ok(Outcome {
        claim: claim.id.clone(),
        p,
        n: None,
        status: if lhs == rhs { Status::Pass } else { Status::Fail },
        lhs: Some(lhs.to_string()),
        rhs: Some(rhs.to_string()),
        detail: None,
        flagged: claim.flagged,
    })
}

/// Exact-vs-native oracle comparison for one claim sum at one prime.
pub fn dual_oracle_agrees(spec: &SumSpec, p: u64, e: u8) -> Result<bool, ClaimError> {
    let m = p.pow(e as u32);
    let native = sum_mod_native(spec, m, p)?;
    let exact = reduce_rational(&sum_exact(spec, p), m)?.value;
    Ok(native == exact)
}

// ---------------------------------------------------------------------------
// sweep orchestration

/// All per-prime checks of one claim over a prime range, sequentially.
pub fn check_claim_over_primes(claim: &Claim, primes: &[u64]) -> Vec<Outcome> {
    let mut out = Vec::new();
    for &p in primes {
        let r = match &claim.kind {
            ClaimKind::Congruence { .. } => check_congruence(claim, p),
            ClaimKind::QuadForm { .. } => check_quadform(claim, p),
            ClaimKind::Relation31 { .. } => check_relation31(claim, p),
            // lifts and divisibility claims are not per-sweep-prime checks;
            // they run through their own drivers below
            ClaimKind::Lift { .. } | ClaimKind::Divisibility { .. } => continue,
        };
        match r {
            Ok(o) => out.push(o),
            Err(e) => out.push(Outcome {
                claim: claim.id.clone(),
                p,
                n: None,
                status: Status::Fail,
                lhs: None,
                rhs: None,
                detail: Some(e.to_string()),
                flagged: claim.flagged,
            }),
        }
    }
    out
}

/// The smallest `count` primes satisfying a lift claim's applicability
/// condition and exclusions.
pub fn smallest_lift_primes(claim: &Claim, count: usize) -> Vec<u64> {
    let ClaimKind::Lift { cond, twist, .. } = &claim.kind else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for p in crate::primes::primes_in(3, 10_000, &claim.excluded) {
        let gated = cond.holds(p).unwrap_or(false);
        let twist_ok = twist.map_or(true, |d| jacobi(d, p).map_or(false, |s| s != 0));
        if gated && twist_ok {
            out.push(p);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// Run a lift claim on its `count` smallest admissible primes with the given
/// n values.
pub fn check_lift_defaults(claim: &Claim, count: usize, ns: &[u64]) -> Vec<Outcome> {
    let mut out = Vec::new();
    for p in smallest_lift_primes(claim, count) {
        for &n in ns {
            match check_lift(claim, p, n) {
                Ok(o) => out.push(o),
                Err(e) => out.push(Outcome {
                    claim: claim.id.clone(),
                    p,
                    n: Some(n),
                    status: Status::Fail,
                    lhs: None,
                    rhs: None,
                    detail: Some(e.to_string()),
                    flagged: claim.flagged,
                }),
            }
        }
    }
    out
}

/// Run a divisibility claim for all n in [n_min, n_max].
pub fn check_divisibility_range(claim: &Claim, n_max: u64) -> Vec<Outcome> {
    let ClaimKind::Divisibility { n_min, .. } = &claim.kind else {
        return Vec::new();
    };
    (*n_min..=n_max)
        .map(|n| {
            check_divisibility(claim, n).unwrap_or_else(|e| Outcome {
                claim: claim.id.clone(),
                p: 0,
                n: Some(n),
                status: Status::Fail,
                lhs: None,
                rhs: None,
                detail: Some(e.to_string()),
                flagged: claim.flagged,
            })
        })
        .collect()
}

/// Parallel sweep over primes (outer loop), all claims per prime; results
/// sorted by (claim id, p, n) so parallel and sequential runs emit the same
/// report.
pub fn sweep(claims: &[Claim], primes: &[u64]) -> Vec<Outcome> {
    let per_prime: Vec<Vec<Outcome>> = crate::par::pmap(primes.to_vec(), |p| {
        let mut out = Vec::new();
        for claim in claims {
            out.extend(check_claim_over_primes(claim, &[p]));
        }
        out
    });
    let mut flat: Vec<Outcome> = per_prime.into_iter().flatten().collect();
    flat.sort_by(|a, b| (&a.claim, a.p, a.n).cmp(&(&b.claim, b.p, b.n)));
    flat
}

/// Sequential version of `sweep` for the bench suite.
pub fn sweep_sequential(claims: &[Claim], primes: &[u64]) -> Vec<Outcome> {
    let per_prime: Vec<Vec<Outcome>> = crate::par::smap(primes.to_vec(), |p| {
        let mut out = Vec::new();
        for claim in claims {
            out.extend(check_claim_over_primes(claim, &[p]));
        }
        out
    });
    let mut flat: Vec<Outcome> = per_prime.into_iter().flatten().collect();
    flat.sort_by(|a, b| (&a.claim, a.p, a.n).cmp(&(&b.claim, b.p, b.n)));
    flat
}
