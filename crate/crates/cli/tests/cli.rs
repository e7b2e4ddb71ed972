use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logmaj"))
}

/// Writes `text` under a per-process scratch directory and returns the path.
fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logmaj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn logmaj")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn diag(name: &str, d: &[f64]) -> String {
    let rows: Vec<Vec<f64>> = (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0.0 }).collect()).collect();
    let text = serde_json::json!({ "dim": d.len(), "re": rows }).to_string();
    scratch(name, &text).to_string_lossy().into_owned()
}

#[test]
fn araki_pair_holds_and_exits_zero() {
    let a = scratch("araki_a.json", r#"{"dim": 2, "re": [[2, 0], [0, 1]]}"#);
    let b = scratch("araki_b.json", r#"{"dim": 2, "re": [[1, 1], [1, 2]]}"#);
    let out = run(&["araki", a.to_str().unwrap(), b.to_str().unwrap(), "--p", "0.5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["holds"], Value::Bool(true));
    // determinants agree: det(A)^p det(B)^p on both sides
    let prod = |key: &str| v[key].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).product::<f64>();
    assert!((prod("lhs") - prod("rhs")).abs() < 1e-12);
}

#[test]
fn failed_verdict_exits_one() {
    // λ(diag(2,1)) is not log-majorized by a spectrum with a smaller determinant
    let a = diag("maj_a.json", &[2.0, 1.0]);
    let b = diag("maj_b.json", &[2.0, 0.5]);
    let out = run(&["majorize", &a, &b, "--kind", "log"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["holds"], Value::Bool(false));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out = run(&["--tol", "nope=1", "run", "ltk"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown tolerance"));

    let bad = scratch("bad.json", r#"{"dim": 3, "re": [[1]]}"#);
    let a = diag("ok.json", &[1.0, 2.0]);
    let out = run(&["majorize", bad.to_str().unwrap(), &a]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["random", "--m", "3", "--kind", "psd-rank:x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_one() {
    let a = diag("present.json", &[1.0]);
    let out = run(&["majorize", "/nonexistent/logmaj.json", &a]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn divergence_matches_scalar_formula() {
    let rho = diag("rho.json", &[0.7, 0.3]);
    let sigma = diag("sigma.json", &[0.4, 0.6]);
    let out = run(&["divergence", &rho, &sigma, "--alpha", "2", "--z", "1"]);
    assert!(out.status.success());
    let q: f64 = 0.7f64.powi(2) / 0.4 + 0.3f64.powi(2) / 0.6;
    let got = json(&out)["d"]["value"].as_f64().unwrap();
    assert!((got - q.ln()).abs() < 1e-12);

    // α > 1 with ρ not supported inside σ
    let singular = diag("sing.json", &[1.0, 0.0]);
    let out = run(&["divergence", &rho, &singular, "--alpha", "2"]);
    assert_eq!(json(&out)["d"]["value"], Value::String("inf".into()));
}

#[test]
fn divergence_scan_writes_csv() {
    let rho = diag("scan_rho.json", &[0.5, 0.5]);
    let sigma = diag("scan_sigma.json", &[0.9, 0.1]);
    let csv = std::env::temp_dir().join(format!("logmaj-cli-{}", std::process::id())).join("scan.csv");
    let out = run(&["divergence", &rho, &sigma, "--scan", "alpha", "--grid", "0:3:7", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,z,value,finite");
    assert_eq!(lines.len(), 8);
}

#[test]
fn commuting_ltk_is_exact() {
    let a = diag("ltk_a.json", &[2.0, 0.0]);
    let b = diag("ltk_b.json", &[3.0, 0.0]);
    let out = run(&["ltk", &a, &b]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["exact"], Value::Bool(true));
    assert!((v["target"]["re"][0][0].as_f64().unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn random_is_seeded() {
    let draw = |seed: &str| run(&["random", "--m", "3", "--kind", "commuting-family:2", "--seed", seed]).stdout;
    assert_eq!(draw("7"), draw("7"));
    assert_ne!(draw("7"), draw("8"));
    assert_eq!(String::from_utf8(draw("7")).unwrap().lines().count(), 2);
}

#[test]
fn suite_csv_and_seed() {
    let out = run(&["--format", "csv", "--seed", "5", "run", "ltk"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,case,ok,margin,error\n"));
    assert!(text.lines().last().unwrap().ends_with(",5"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("logmaj-cli-{}", std::process::id())).join("eq.jsonl");
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    let out = run(&["--out", path.to_str().unwrap(), "run", "taylor"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let last: Value = serde_json::from_str(std::fs::read_to_string(&path).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(last["suite"], "taylor");
    assert_eq!(last["failures"], 0);
}
