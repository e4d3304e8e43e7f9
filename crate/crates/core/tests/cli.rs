use std::process::{Command, Output};

use planelab::export::{read_unital_points, Format};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planelab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--plane", "moulton:k=2", "--samples", "200"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).starts_with("PASS plane-axioms"));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("seed 42"));

    let bad = run(&["verify", "--plane", "tschet:r=3:boundary=0.1", "--samples", "500"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
    assert!(stdout(&bad).contains("witness"));

    let skew = run(&["verify", "--plane", "mutation-h:mu=0.75", "--suite", "algebra:skewfield", "--samples", "100"]);
    assert_eq!(skew.status.code(), Some(1));

    let err = run(&["verify", "--plane", "mutation-h:mu=0.3"]);
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn verify_json_is_machine_readable() {
    let o = run(&["--format", "json", "verify", "--plane", "classical-c", "--suite", "plane", "--suite", "polarities", "--samples", "50"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn unital_export_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = run(&["unital", "--plane", "mutation-h:mu=0.75", "--polarity", "pi", "--samples", "20", "--seed", "9", "--format", "csv", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let pts = read_unital_points(&a, Format::Csv).unwrap();
    assert_eq!(pts.len(), 20);
    assert_eq!(pts[0].len(), 8);

    let json = run(&["unital", "--plane", "mutation-h:mu=0.75", "--polarity", "pi", "--samples", "20", "--seed", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["points"].as_array().unwrap().len(), 20);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moulton.svg");
    let o = run(&["render", "--plane", "moulton:k=2", "--window=-4,4,-4,4", "--overlay", "pi", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("#c22"));
    assert_eq!(run(&["render", "--plane", "classical-h"]).status.code(), Some(2));
}

#[test]
fn desargues_reports_failures() {
    let o = run(&["desargues", "--plane", "moulton:k=2", "--trials", "100"]);
    assert!(stdout(&o).contains("failing configuration found"));
    let o = run(&["desargues", "--plane", "classical-r", "--trials", "100"]);
    assert!(stdout(&o).contains("no failure sampled"));
    let o = run(&["--format", "json", "desargues", "--plane", "tschet:r=2", "--disks", "3", "--trials", "100"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["max_discrepancy"].as_f64().unwrap() > 1e-3));
}

#[test]
fn motions_summary() {
    let o = run(&["motions", "--plane", "mutation-h:mu=0.75", "--polarity", "rho-bar", "--samples", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("50/50 draws agree"), "{text}");
    assert!(text.contains("= 11"));
}

#[test]
fn facts_queries() {
    let o = run(&["facts", "--fix", "flag", "--group", "semisimple"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("d=11"));
    let o = run(&["--format", "json", "facts", "--group", "arbitrary"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v.as_array().unwrap().is_empty());
    assert_eq!(run(&["facts", "--fix", "nonsense"]).status.code(), Some(2));
}
