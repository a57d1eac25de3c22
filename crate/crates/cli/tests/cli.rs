//! End-to-end checks of the binary: exit codes, report formats, and the
//! documented flag surface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pi-series-lab"))
}

#[test]
fn verify_series_single_id_passes() {
    let out = bin().args(["verify-series", "--id", "W2", "--digits", "50"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS W2"));
}

#[test]
fn verify_series_unknown_id_is_usage_error() {
    let out = bin().args(["verify-series", "--id", "NOPE"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown series id"));
}

#[test]
fn verify_series_writes_valid_json_reports() {
    let dir = std::env::temp_dir().join("pi-series-lab-test-report");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = bin()
        .args(["verify-series", "--id", "W2", "--id", "F4X36", "--digits", "30"])
        .args(["--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let arr = parsed.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for rec in arr {
        for field in ["id", "digits", "terms_used", "tail_bound", "difference", "pass"] {
            assert!(rec.get(field).is_some(), "missing {field} in {rec}");
        }
        assert_eq!(rec["pass"], serde_json::Value::Bool(true));
    }
}

#[test]
fn bad_prime_range_is_usage_error() {
    let out = bin().args(["check-congruences", "--primes", "300..3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn congruence_run_emits_json_lines() {
    let dir = std::env::temp_dir().join("pi-series-lab-test-lines");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("outcomes.jsonl");
    let out = bin()
        .args(["check-congruences", "--claims", "W2.cong,W2.lift", "--primes", "3..60"])
        .args(["--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut seen = 0;
    for line in text.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(rec.get("claim").is_some() && rec.get("status").is_some());
        seen += 1;
    }
    assert!(seen > 10, "only {seen} records");
}

#[test]
fn unknown_claim_id_is_usage_error() {
    let out = bin().args(["check-congruences", "--claims", "NOPE.cong"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_identities_reports_anchor() {
    let out = bin().args(["verify-identities", "--order", "20", "--n-max", "40"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2150"), "anchor value missing from report: {text}");
    assert!(text.contains("1075/72"));
}

#[test]
fn fault_injection_trips_the_identity_suite() {
    let out = bin()
        .args(["verify-identities", "--order", "10", "--n-max", "10", "--fault-inject"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_recovers_and_declines() {
    let out = bin()
        .args(["search", "--kind", "W", "--m", "40", "--x", "9/10", "--d", "15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("45k+8"), "{text}");
    assert!(text.contains("sqrt(15)"));

    let out = bin()
        .args(["search", "--kind", "W", "--m", "40", "--x", "1/2", "--d", "15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "negative control should exit 3");
}

#[test]
fn identify_by_registry_id() {
    let out = bin().args(["identify", "--id", "W12"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sqrt(2)") && text.contains("pi"), "{text}");
}

#[test]
fn run_config_bounds_are_enforced() {
    let out = bin().args(["verify-series", "--id", "W2", "--digits", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["check-congruences", "--primes", "3..2000000"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn external_registry_and_claims_files_load() {
    let dir = std::env::temp_dir().join("pi-series-lab-test-external");
    std::fs::create_dir_all(&dir).unwrap();
    let reg = dir.join("registry.json");
    std::fs::write(
        &reg,
        r#"[{"id": "XF", "status": "proven", "a": 4, "b": 1, "base": "36",
             "term_kind": {"name": "F4"}, "rhs": "18/(sqrt(15)*pi)", "label": "external"}]"#,
    )
    .unwrap();
    let out = bin()
        .args(["verify-series", "--id", "XF", "--digits", "30"])
        .args(["--registry", reg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS XF"));

    let claims = dir.join("claims.json");
    std::fs::write(
        &claims,
        r#"[{"id": "XF.cong", "kind": "congruence", "e": 2, "excluded": [2,3,5],
             "sum": {"term_kind": {"name": "F4"}, "a": 4, "b": 1, "base": "36"},
             "prediction": {"cases": [{"cond": {}, "expr": "p*J(-15)"}]}}]"#,
    )
    .unwrap();
    let out = bin()
        .args(["check-congruences", "--claims", "XF.cong", "--primes", "3..25"])
        .args(["--claims-file", claims.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // malformed registry is a usage error
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = bin()
        .args(["verify-series", "--all", "--registry", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threads_flag_gives_identical_output() {
    let run = |threads: &str| {
        let out = bin()
            .args(["check-congruences", "--claims", "W1.cong,W1.qf", "--primes", "3..80", "--threads", threads])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("4"));
}
