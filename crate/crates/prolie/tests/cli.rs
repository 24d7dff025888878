use std::fs;

use prolie::cli::{run, Outcome};
use serde_json::Value;

fn prolie(args: &[&str]) -> Outcome {
    prolie_env(args, None)
}

fn prolie_env(args: &[&str], seed: Option<&str>) -> Outcome {
    let mut v = vec!["prolie".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(&v, seed)
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", o.stdout, o.stderr))
}

const BROKEN_JACOBI: &str = "algebra broken
basis e(i) for i >= 1
weight e(i) = i
bracket [e(1), e(i)] = e(i + 1) for i >= 2
bracket [e(2), e(4)] = e(6)
";

#[test]
fn usage_errors_exit_two() {
    assert_eq!(prolie(&[]).code, 2);
    assert_eq!(prolie(&["frobnicate"]).code, 2);
    assert_eq!(prolie(&["rank", "/nonexistent/x.lie"]).code, 2);
    assert_eq!(prolie(&["rank", "catalog:nope"]).code, 2);
    assert_eq!(prolie(&["rank", "catalog:m1", "--windows", "0"]).code, 2);
    assert_eq!(prolie(&["exp", "catalog:m1", "--derivation", "torus(1)", "--window", "5"]).code, 2);
    assert_eq!(prolie(&["exp", "catalog:m1", "--derivation", "bogus"]).code, 2);
}

#[test]
fn help_and_version_exit_zero() {
    let h = prolie(&["--help"]);
    assert_eq!(h.code, 0);
    assert!(h.stdout.contains("char-pronilpotent"));
    assert_eq!(prolie(&["--version"]).code, 0);
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.lie");
    fs::write(&path, "algebra bad\nbasis e(i) for i >= 1\nbracket [e(1), e(2)] e(3)\n").unwrap();
    let o = prolie(&["check", path.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3, column 22"), "{}", o.stderr);
}

#[test]
fn failed_certification_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.lie");
    fs::write(&path, BROKEN_JACOBI).unwrap();
    let o = prolie(&["check", path.to_str().unwrap(), "--window", "8", "--format", "json"]);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["verdicts"][0]["property"], "jacobi");
    assert_eq!(v["verdicts"][0]["status"], "fails_at_depth");

    let cocycle = dir.path().join("bad.cocycle");
    fs::write(&cocycle, "cocycle bad\nspace z\nvalue [e(2), e(4)] = z\n").unwrap();
    let o = prolie(&["central-ext", "catalog:m1", "--cocycle", cocycle.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["verdicts"][0]["property"], "cocycle");
}

#[test]
fn analysis_failures_are_not_run_failures() {
    // pro-solvability failing is an answer, not a failed certification
    let o = prolie(&["profile", "catalog:m1"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("pro_solvable: fails_at_depth"));
}

#[test]
fn report_shape() {
    let o = prolie(&["rank", "catalog:m1", "--windows", "8,12", "--format", "json"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["command", "input_hash", "results", "schema", "tool_version", "verdicts", "warnings", "windows"]
    );
    assert_eq!(v["schema"], 1);
    assert_eq!(v["results"]["rank"], 2);
    assert_eq!(v["results"]["maximal_rank"], true);
    assert_eq!(v["windows"], serde_json::json!([8, 12]));
    assert_eq!(v["input_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn rationals_are_strings() {
    let o = prolie(&["exp", "catalog:m1", "--derivation", "ad(e(1))", "--window", "4", "--format", "json"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["results"]["exp"][3][1], "1/2");
    assert_eq!(v["results"]["exp"][0][0], "1");
}

#[test]
fn reports_are_deterministic() {
    let args = ["char-pronilpotent", "catalog:n1", "--format", "json"];
    assert_eq!(prolie(&args).stdout, prolie(&args).stdout);
}

#[test]
fn seed_precedence() {
    let base = ["char-pronilpotent", "catalog:m1", "--windows", "6,8", "--format", "json"];
    let seed = |o: &Outcome| json(o)["results"]["seed"].as_u64().unwrap();
    let hashed = seed(&prolie(&base));
    assert_eq!(seed(&prolie_env(&base, Some("42"))), 42);
    let mut over = base.to_vec();
    over.extend(["--seed-override", "7"]);
    assert_eq!(seed(&prolie_env(&over, Some("42"))), 7);
    assert_ne!(hashed, 42);
    assert_eq!(prolie_env(&base, Some("x")).code, 2);
}

#[test]
fn parameters_override_catalog_defaults() {
    let a = json(&prolie(&["torus", "catalog:W(2)", "--window", "12", "--format", "json"]));
    let b = json(&prolie(&["torus", "catalog:W", "--param", "s=2", "--window", "12", "--format", "json"]));
    assert_eq!(a["results"], b["results"]);
    assert_eq!(prolie(&["torus", "catalog:m1", "--param", "s=2"]).code, 2);
}

#[test]
fn constructions_write_parseable_files() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [("extend", vec![]), ("current", vec!["--window", "6"]), ("sum", vec!["catalog:n1"])] {
        let out = dir.path().join(format!("{cmd}.lie"));
        let mut args = vec![cmd, "catalog:m1"];
        args.extend(extra);
        args.extend(["--out", out.to_str().unwrap()]);
        let o = prolie(&args);
        assert_eq!(o.code, 0, "{cmd}: {}", o.stderr);
        let check = prolie(&["check", out.to_str().unwrap(), "--window", "6"]);
        assert_eq!(check.code, 0, "{cmd}: {}", check.stderr);
    }
}

#[test]
fn catalog_listing() {
    let v = json(&prolie(&["catalog", "--format", "json"]));
    assert_eq!(v["results"]["count"], 8);
    let one = prolie(&["catalog", "n1"]);
    assert_eq!(one.code, 0);
    assert!(one.stdout.contains("bracket"));
    assert_eq!(prolie(&["catalog", "zzz"]).code, 2);
}
