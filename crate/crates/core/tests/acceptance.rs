//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p pi-series-core --test acceptance -- --nocapture`.

use pi_series_core::bigfloat::BigFloat;
use pi_series_core::closedform::{self, parse_expr};
use pi_series_core::congruence::{
    self, builtin_claims, check_divisibility_range, check_lift_defaults, check_quadform,
    dual_oracle_agrees, ClaimKind, Status as ClaimStatus,
};
use pi_series_core::cornacchia::represent_form;
use pi_series_core::discovery::{self, DEFAULT_DISCRIMINANTS};
use pi_series_core::exact::{parse_rat, rat, rat_int};
use pi_series_core::powerseries;
use pi_series_core::primes::primes_in;
use pi_series_core::sequences;
use pi_series_core::series::{
    builtin_registry, find_entry, sum_series, transform_w_to_franel4, verify_entries, verify_entry,
    Status, TermKind,
};
use pi_series_core::Int;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("criterion {criterion}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

const THEOREM_IDS: [&str; 6] = ["W2", "W3", "W6", "W8", "W12", "W15"];
const COOPER_IDS: [&str; 6] = ["F4X36", "F4N64", "F4X196", "F4N324", "F4X1296", "F4X5776"];
const CONJECTURAL_IDS: [&str; 22] = [
    "W1", "W4", "W5", "W7", "W9", "W10", "W11", "W13", "W14", // nine W-kernel conjectures
    "IX1", "IX2", // trinomial-pair pair
    "T2B256", // central square trinomial
    "BF2160", "BF3645", "BF1728N", "BF160N", "BF27648", "BF276480", "FO135H", // F-kernel family
    "CR576A", "CR576B", // reciprocal convolutions
    "CV256", // dual convolution
];

#[test]
fn criterion_1_theorem_series_to_50_digits() {
    let started = Instant::now();
    let registry = builtin_registry();
    let entries: Vec<_> = THEOREM_IDS.iter().map(|id| find_entry(&registry, id).unwrap().clone()).collect();
    let reports = verify_entries(&entries, 50);
    let mut all = true;
    let mut detail = String::new();
    for r in reports {
        let r = r.expect("summation converged");
        // pass already encodes |LHS-RHS| + tail < 10^-45
        all &= r.pass;
        detail.push_str(&format!("{}({} terms, diff {}) ", r.id, r.terms_used, r.difference));
    }
    let elapsed = started.elapsed().as_secs_f64();
    all &= elapsed < 60.0;
    report("1", all, &format!("{detail}in {elapsed:.1}s (< 60s)"));
}

#[test]
fn criterion_2_transform_factors_exact() {
    let cases = [
        (45i64, 8i64, 10i64, "1075/72"),
        (1360, 389, -15, "9225/32"),
        (735, 124, 50, "10125/784"),
        (376380, 69727, -80, "5209600/243"),
        (348840, 47461, 325, "1314625/243"),
        (41673840, 4777111, 1445, "147758475/1444"),
    ];
    let mut all = true;
    let mut detail = String::new();
    for (a, b, x, want) in cases {
        let (t, in_region) = transform_w_to_franel4(a, b, &rat_int(x)).unwrap();
        let (_, _, factor, _) = t.primitive();
        let ok = in_region && factor == parse_rat(want).unwrap();
        all &= ok;
        detail.push_str(&format!("{a}k+{b} -> {want}{} ", if ok { "" } else { " (MISMATCH)" }));
    }
    report("2", all, &detail);
}

#[test]
fn criterion_3_cooper_and_yang() {
    let registry = builtin_registry();
    let mut all = true;
    let mut detail = String::new();
    for id in COOPER_IDS.iter().chain(["F4X36Y"].iter()) {
        let e = find_entry(&registry, id).unwrap();
        let r = verify_entry(e, 50).unwrap();
        all &= r.pass;
        detail.push_str(&format!("{id} ", ));
    }
    // Yang and Cooper forms of the same constant agree to 60 digits and
    // exactly under squaring
    let yang = parse_expr("18/(sqrt(15)*pi)").unwrap();
    let cooper = parse_expr("6*sqrt(15)/(5*pi)").unwrap();
    let vy = closedform::eval_expr(&yang, 60).unwrap();
    let vc = closedform::eval_expr(&cooper, 60).unwrap();
    let agree = vy.agrees_rel(&vc, 60) && closedform::pi_square(&yang) == closedform::pi_square(&cooper);
    all &= agree;
    detail.push_str(&format!("yang==cooper to 60 digits: {agree}"));
    report("3", all, &detail);
}

#[test]
fn criterion_4_generating_function_suite() {
    let started = Instant::now();
    let gf = powerseries::check_gf_coefficients(60);
    let srec = sequences::check_s_recurrence(300);
    let anchors_ok = srec.anchors[0] == Int::from(0)
        && srec.anchors[1] == Int::from(2150)
        && srec.anchors[2] == Int::from(103680);
    let franel = sequences::check_franel4_recurrence(500);
    let ziden = powerseries::verify_weighted_gf_identity(60);
    let elapsed = started.elapsed().as_secs_f64();
    let all = gf.is_ok()
        && srec.pass
        && srec.coefficient_resolution == 16
        && anchors_ok
        && franel.is_ok()
        && ziden.pass
        && elapsed < 30.0;
    report(
        "4",
        all,
        &format!(
            "gf coeffs n<=60 {:?}, s-recurrence n<=300 (coeff {}n, anchors 0/2150/103680), franel n<=500 {:?}, weighted identity order 60 {}, in {elapsed:.1}s (< 30s)",
            gf.is_ok(),
            srec.coefficient_resolution,
            franel.is_ok(),
            ziden.pass
        ),
    );
}

#[test]
fn criterion_5_conjectural_series_to_40_digits() {
    let registry = builtin_registry();
    let entries: Vec<_> = CONJECTURAL_IDS.iter().map(|id| find_entry(&registry, id).unwrap().clone()).collect();
    // sanity: these are exactly the non-proven entries plus the confirmed
    // dual-convolution identity
    for e in &entries {
        assert!(e.status != Status::Proven || e.id == "CV256", "{} unexpectedly proven", e.id);
    }
    let reports = verify_entries(&entries, 40);
    let mut all = true;
    let mut failed = String::new();
    for r in reports {
        let r = r.expect("summation converged");
        if !r.pass {
            failed.push_str(&format!("{} (diff {}) ", r.id, r.difference));
        }
        all &= r.pass;
    }
    report("5", all, &format!("22 conjectural/open entries at 40 digits{}", if all { String::new() } else { format!("; failed: {failed}") }));
}

#[test]
fn criterion_6_congruence_sweep_to_300() {
    let started = Instant::now();
    let claims = builtin_claims();
    let primes = primes_in(3, 299, &[]);
    let outcomes = congruence::sweep(&claims, &primes);
    let hard_fails: Vec<_> = outcomes
        .iter()
        .filter(|o| o.status == ClaimStatus::Fail && !o.flagged)
        .collect();
    let flagged_fails: Vec<_> = outcomes
        .iter()
        .filter(|o| o.status == ClaimStatus::Fail && o.flagged)
        .collect();
    for o in &hard_fails {
        println!(
            "  reproduction: claim {} p={} lhs={:?} rhs={:?} detail={:?}",
            o.claim, o.p, o.lhs, o.rhs, o.detail
        );
    }
    for o in &flagged_fails {
        println!("  flagged-separately: claim {} p={} (transcription-ambiguous)", o.claim, o.p);
    }
    // dual-oracle cross-check on 50 random (claim, p) pairs with p < 50
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(pi_series_core::test_seed());
    let small = primes_in(3, 49, &[]);
    let sum_claims: Vec<_> = claims.iter().filter(|c| c.sum.is_some()).collect();
    let mut oracle_ok = true;
    let mut checked = 0;
    while checked < 50 {
        let c = sum_claims[rng.gen_range(0..sum_claims.len())];
        let p = small[rng.gen_range(0..small.len())];
        if c.excluded.contains(&p) {
            continue;
        }
        let spec = c.sum.as_ref().unwrap();
        match dual_oracle_agrees(spec, p, 2) {
            Ok(ok) => {
                oracle_ok &= ok;
                checked += 1;
            }
            Err(_) => continue, // non-invertible denominator; pick again
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let all = hard_fails.is_empty() && oracle_ok && elapsed < 600.0;
    report(
        "6",
        all,
        &format!(
            "{} outcomes, {} unflagged failures, {} flagged-variant failures reported separately, dual-oracle 50/50 {}, in {elapsed:.1}s (< 600s)",
            outcomes.len(),
            hard_fails.len(),
            flagged_fails.len(),
            oracle_ok
        ),
    );
}

#[test]
fn criterion_7_quadform_case_tables_to_1000() {
    let claims = builtin_claims();
    let mut all = true;
    let mut detail = String::new();
    for claim in claims.iter() {
        let ClaimKind::QuadForm { cases, .. } = &claim.kind else { continue };
        for p in primes_in(3, 999, &claim.excluded) {
            let hits: Vec<_> = cases.iter().filter(|c| c.cond.holds(p).unwrap_or(false)).collect();
            if hits.len() != 1 {
                all = false;
                detail.push_str(&format!("{}: {} cases at p={p} ", claim.id, hits.len()));
                continue;
            }
            if let Some((a, d)) = hits[0].form {
                let target = if hits[0].target_two_p { 2 * p } else { p };
                if represent_form(a, d, target, p).is_none() {
                    all = false;
                    detail.push_str(&format!("{}: no representation {a}x^2+{d}y^2={target} ", claim.id));
                }
            }
        }
    }
    // spot examples: 13 = 3^2 + 4*1^2 and 11 = 2^2 + 7*1^2
    let w1 = claims.iter().find(|c| c.id == "W1.qf").unwrap();
    let o = check_quadform(w1, 13).unwrap();
    let spot1 = o.status == ClaimStatus::Pass && o.lhs.as_deref() == Some("10"); // 4*9-26 mod 169
    let cr = claims.iter().find(|c| c.id == "CR576B.qf").unwrap();
    let o = check_quadform(cr, 11).unwrap();
    let spot2 = o.status == ClaimStatus::Pass && o.lhs.as_deref() == Some("115"); // -6 mod 121
    all &= spot1 && spot2;
    report(
        "7",
        all,
        &format!("exactly-one-case and representability over p < 1000; spot checks 4*9-26=10 mod 169 {spot1}, -6=115 mod 121 {spot2} {detail}"),
    );
}

#[test]
fn criterion_8_divisibility_and_lifts() {
    let claims = builtin_claims();
    let mut all = true;
    let mut detail = String::new();
    let mut div_checks = 0;
    let mut lift_checks = 0;
    let mut flagged_fails = 0;
    for claim in &claims {
        match &claim.kind {
            ClaimKind::Divisibility { parity, .. } => {
                let n_max = match parity {
                    congruence::ParityRule::OddIffPowerOfTwo
                    | congruence::ParityRule::OddIffPowerOfTwoPlusOne => 64,
                    _ => 40,
                };
                for o in check_divisibility_range(claim, n_max) {
                    div_checks += 1;
                    if o.status == ClaimStatus::Fail {
                        all = false;
                        detail.push_str(&format!("{} n={:?} ", claim.id, o.n));
                    }
                }
            }
            ClaimKind::Lift { .. } => {
                for o in check_lift_defaults(claim, 3, &[1, 2]) {
                    lift_checks += 1;
                    if o.status == ClaimStatus::Fail {
                        if o.flagged {
                            flagged_fails += 1;
                            println!("  flagged-separately: {} p={} n={:?}", o.claim, o.p, o.n);
                        } else {
                            all = false;
                            detail.push_str(&format!("{} p={} n={:?} ", claim.id, o.p, o.n));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    report(
        "8",
        all,
        &format!(
            "{div_checks} divisibility checks (n <= 40, 64 for power-of-two parity), {lift_checks} lift checks (3 smallest primes, n in {{1,2}}), {flagged_fails} flagged-variant failures reported separately {detail}"
        ),
    );
}

#[test]
fn criterion_9_discovery_workflow() {
    let started = Instant::now();
    // recover 45k+8 from the 9/10 kernel at base 40
    let t = discovery::search_template(TermKind::WPoly { x: rat(9, 10) }, rat_int(40));
    let w2 = discovery::search_ab(&t, 15, 60, &Int::from(1_000_000)).unwrap();
    let got_w2 = matches!(&w2, Some(ws) if ws.a == Int::from(45) && ws.b == Int::from(8));
    // recover 4k+1 from the Franel kernel at base 36
    let t = discovery::search_template(TermKind::Franel4, rat_int(36));
    let cooper = discovery::search_ab(&t, 15, 60, &Int::from(1_000_000)).unwrap();
    let got_cooper = matches!(&cooper, Some(ws) if ws.a == Int::from(4) && ws.b == Int::from(1));
    // negative control
    let t = discovery::search_template(TermKind::WPoly { x: rat(1, 2) }, rat_int(40));
    let none = discovery::search_ab(&t, 15, 60, &Int::from(1_000_000)).unwrap().is_none();
    // identify all six theorem closed forms
    let registry = builtin_registry();
    let mut identified = 0;
    for id in THEOREM_IDS {
        let e = find_entry(&registry, id).unwrap();
        let s = sum_series(e, 60).unwrap();
        if let Some(expr) = discovery::identify_series(&s.value, 60, &DEFAULT_DISCRIMINANTS) {
            if closedform::pi_square(&expr).is_some()
                && closedform::pi_square(&expr) == closedform::pi_square(&e.rhs)
            {
                identified += 1;
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let all = got_w2 && got_cooper && none && identified == 6 && elapsed < 120.0;
    report(
        "9",
        all,
        &format!(
            "search (45,8) {got_w2}, search (4,1) {got_cooper}, negative control none {none}, identified {identified}/6 closed forms, in {elapsed:.1}s (< 120s)"
        ),
    );
}

#[test]
fn criterion_10_legendre_growth() {
    let ratio = sequences::legendre_asymptote_ratio(500, 25);
    let lo = BigFloat::parse("0.999").unwrap();
    let hi = BigFloat::parse("1.001").unwrap();
    let in_band = ratio.cmp_value(&lo) == std::cmp::Ordering::Greater
        && ratio.cmp_value(&hi) == std::cmp::Ordering::Less;
    let threshold = sequences::legendre_growth_threshold(1000, 300);
    let ok = in_band && threshold.is_some();
    report(
        "10",
        ok,
        &format!(
            "ratio(500) = {} in [0.999, 1.001]; minimal N = {:?} <= 1000 with n 8^n P_n(2) < 30^n on [N, N+300]",
            ratio.decimal_string(8),
            threshold
        ),
    );
}

#[test]
fn residue_formula_cases_partition_admissible_primes() {
    // companion structural check for multi-case congruence predictions
    let claims = builtin_claims();
    for claim in &claims {
        let ClaimKind::Congruence { cases, .. } = &claim.kind else { continue };
        if cases.len() < 2 {
            continue;
        }
        for p in primes_in(3, 999, &claim.excluded) {
            let hits = cases.iter().filter(|c| c.cond.holds(p).unwrap_or(false)).count();
            assert_eq!(hits, 1, "{} at p={p}: {hits} cases", claim.id);
        }
    }
}

#[test]
fn sign_of_negative_sum_is_reported() {
    // a deliberately corrupted weight must fail verification (sensitivity)
    let registry = builtin_registry();
    let mut e = find_entry(&registry, "W2").unwrap().clone();
    e.b = 9;
    let r = verify_entry(&e, 30).unwrap();
    assert!(!r.pass);
}
