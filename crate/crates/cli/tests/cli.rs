use std::process::{Command, Output};

use serde_json::Value;

fn univoque(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univoque"))
        .args(args)
        .env_remove("UNIVOQUE_MAX_ITERS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = univoque(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "one payload line");
    serde_json::from_str(&text).unwrap()
}

fn integers_only(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_u64() || n.is_i64(),
        Value::Array(a) => a.iter().all(integers_only),
        Value::Object(m) => m.values().all(integers_only),
        _ => true,
    }
}

fn rational(v: &Value) -> (String, String) {
    (
        v["num"].as_str().unwrap().into(),
        v["den"].as_str().unwrap().into(),
    )
}

#[test]
fn klconstant_prints_five_digits() {
    let v = json(&["klconstant", "--tol", "1e-5"]);
    assert_eq!(v["result"]["decimal"], "1.78723");
    assert_eq!(v["command"], "klconstant");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["status"], "ok");
}

#[test]
fn eval_is_exact() {
    let v = json(&["eval", "--seq", "(10)^", "--q", "3/2"]);
    assert_eq!(rational(&v["result"]["value"]), ("6".into(), "5".into()));
    let v = json(&["eval", "--seq", "1", "--q", "2"]);
    assert_eq!(rational(&v["result"]["value"]), ("1".into(), "2".into()));
}

#[test]
fn prop51_certifies_both_gaps() {
    let v = json(&["prop51", "--word", "110100"]);
    assert_eq!(v["result"]["sum_gap_ok"], true);
    assert_eq!(v["result"]["product_gap_ok"], true);
}

#[test]
fn solve_reports_a_correct_decimal() {
    let v = json(&["solve", "--seq", "(110100)^", "--x", "1", "--tol", "1e-6"]);
    let lo: f64 = v["result"]["lo_decimal"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["result"]["hi_decimal"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 1.788539831 && 1.788539831 <= hi && hi - lo <= 1e-6);
    let v = json(&["solve", "--seq", "(1)^", "--tol", "1e-6"]);
    assert_eq!(v["result"]["decimal"], "2.000000");
}

#[test]
fn payloads_round_trip_byte_identically() {
    for args in [
        &["klconstant", "--tol", "1e-4"][..],
        &["match", "--alpha", "4/3"],
        &["decompose", "--x", "2/3"],
        &["level", "--x", "1", "--j", "1", "--depth", "7"],
        &["nm", "--m", "3", "--depth", "6"],
    ] {
        let out = univoque(args);
        let text = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(format!("{v}\n"), text);
        assert!(integers_only(&v), "floating point in {text}");
    }
}

#[test]
fn payloads_are_deterministic() {
    let args = ["level", "--x", "3/4", "--j", "1", "--depth", "8"];
    let (a, b) = (json(&args), json(&args));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["params"], b["params"]);
}

#[test]
fn bad_literals_exit_2_naming_the_token() {
    let cases: [&[&str]; 4] = [
        &["eval", "--seq", "(1x)^", "--q", "2"],
        &["eval", "--seq", "(10)^", "--q", "3/0"],
        &["solve", "--seq", "(10)^", "--tol", "tiny"],
        &["match", "--alpha", "one"],
    ];
    for args in cases {
        let out = univoque(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        let token = args
            .iter()
            .find(|a| ["(1x)^", "3/0", "tiny", "one"].contains(a))
            .unwrap();
        assert!(err.contains(token), "{err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unknown_flags_exit_2() {
    let out = univoque(&["klconstant", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--bogus"));
    assert_eq!(univoque(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn iteration_cap_gives_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_univoque"))
        .args(["klconstant", "--tol", "1e-5"])
        .env("UNIVOQUE_MAX_ITERS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(v["precision"]["max_iters"], 4);
    assert!(v["result"]["best"].is_object());
}

#[test]
fn level_csv_has_the_documented_columns() {
    let out = univoque(&[
        "level", "--x", "1", "--j", "1", "--depth", "6", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,kind,lo,hi"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("11101,gap,")));
    assert!(rows.iter().all(|r| r.split(',').count() == 4));
}

#[test]
fn match_sweep_csv() {
    let out = univoque(&[
        "match-sweep",
        "--from",
        "1",
        "--to",
        "2",
        "--count",
        "5",
        "--budget",
        "60",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,verdict,m_or_cycle_length");
    assert_eq!(lines[3], "3/2,nonmatching,2");
    assert_eq!(lines[5], "2,matched,1");
}

#[test]
fn match_reports_orbits() {
    let v = json(&["match", "--alpha", "2"]);
    assert_eq!(v["result"]["verdict"]["kind"], "matched");
    assert_eq!(v["result"]["verdict"]["step"], 1);
    assert_eq!(v["result"]["orbit_one"][1], "0");
}

#[test]
fn csv_is_refused_where_unsupported() {
    let out = univoque(&["klconstant", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_2() {
    let out = univoque(&["component", "--word", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = univoque(&["dyadic", "--x", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
}
