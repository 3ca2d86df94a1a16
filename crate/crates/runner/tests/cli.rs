use std::process::Command;

fn fano(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fano")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn verify_passing_case() {
    let (code, out) = fano(&["verify", "--case", "3.21", "--divisor", "S"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS [1] 3.21: beta:S reproduces"));
    assert!(out.lines().last().unwrap().starts_with("PASS 3.21"));
}

#[test]
fn unknown_case_is_an_input_error() {
    assert_eq!(fano(&["verify", "--case", "nosuch"]).0, 2);
    assert_eq!(fano(&["beta", "--case", "3.21", "--divisor", "Nothing"]).0, 2);
    assert_eq!(fano(&["certify", "--case", "3.21", "--target", "nothing"]).0, 2);
}

#[test]
fn documented_misprint_is_a_verification_failure() {
    let (code, out) = fano(&["verify", "--case", "3.18"]);
    assert_eq!(code, 1);
    assert!(out.contains("ERRATUM [1] 3.18: beta:Pi reproduces"));
}

#[test]
fn divisor_filter_drops_other_divisors() {
    let (code, out) = fano(&["verify", "--case", "4.11", "--divisor", "E", "--json"]);
    assert_eq!(code, 1);
    let checks: serde_json::Value = serde_json::from_str(&out).unwrap();
    for c in checks.as_array().unwrap() {
        assert_ne!(c["divisor"], "St");
    }
}

#[test]
fn beta_at_a_point() {
    let (code, out) = fano(&["beta", "--case", "4.10", "--divisor", "E", "--at", "a1=1,a2=1,b=1,c=1"]);
    assert_eq!(code, 0);
    assert!(out.contains("at a1=1,a2=1,b=1,c=1: -4/21"), "{out}");
}

#[test]
fn df_oracles_agree() {
    let (code, out) = fano(&["df", "--case", "2.26", "--oracle", "both"]);
    assert_eq!(code, 0);
    assert!(out.contains("agreement: true"));
    let (code, out) = fano(&["df", "--case", "2.26", "--oracle", "series"]);
    assert_eq!(code, 0);
    assert!(!out.contains("closed:"));
    assert_eq!(fano(&["df", "--case", "3.21"]).0, 2);
}

#[test]
fn certify_a_branch() {
    let (code, out) = fano(&["certify", "--case", "4.9", "--target", "b-at-least-a"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS b-at-least-a: expansion matches"));
}

#[test]
fn report_is_deterministic_and_complete() {
    let (code, a) = fano(&["report", "--format", "json"]);
    assert_eq!(code, 0);
    let (_, b) = fano(&["report", "--format", "json"]);
    assert_eq!(a, b);
    let rows: serde_json::Value = serde_json::from_str(&a).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 26);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 7);
    for k in ["id", "description", "mechanism", "witness", "formula", "verdict", "status"] {
        assert!(rows[0].get(k).is_some(), "{k}");
    }
    let row = |id: &str| rows.iter().find(|r| r["id"] == id).unwrap();
    assert_eq!(row("2.26")["mechanism"], "localization");
    assert_eq!(row("2.26")["verdict"], "K-unstable for every ample L");
    assert!(row("2.26")["formula"].as_str().unwrap().starts_with("DF = "));
    assert_eq!(row("2.21")["verdict"], "not K-polystable for every ample L (degeneration, not computed)");
    assert_eq!(row("dP7")["verdict"], "K-unstable for every ample L");
    let (_, md) = fano(&["report", "--format", "md"]);
    assert_eq!(md.lines().count(), 28);
}

#[test]
fn verify_all_does_not_depend_on_workers() {
    let (code1, one) = fano(&["verify-all", "--jobs", "1"]);
    let (code4, four) = fano(&["verify-all", "--jobs", "4"]);
    assert_eq!(one, four);
    assert_eq!(code1, code4);
    assert_eq!(one.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).count(), 26);
}
