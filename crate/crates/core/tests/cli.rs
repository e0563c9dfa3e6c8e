//! Command-line behaviour: outputs, exit codes and reproducibility.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov-copula")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn measure_reports_independence_and_reference_families() {
    let pi = json(&["measure", "--copula", "pi"]);
    assert!(pi["zeta1"].as_f64().unwrap().abs() < 1e-9);
    assert!(pi["r"].as_f64().unwrap().abs() < 1e-9);
    let g = json(&["measure", "--copula", "galambos:3", "--m", "512"]);
    assert!((g["zeta1"].as_f64().unwrap() - 0.7513).abs() <= 0.005);
    let keys: Vec<&String> = g.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn exit_codes_distinguish_validation_from_runtime_errors() {
    assert_eq!(run(&["measure", "--copula", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--copula", "gumbel:0.5"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--copula", "pi", "--rule", "simpson"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--copula", "pi", "--R", "0"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--copula", "pi", "--sizes", "5"]).status.code(), Some(2));
    assert_eq!(run(&["measure"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "--input", "/nonexistent/x.csv", "--mode", "chatterjee"]).status.code(), Some(1));
}

#[test]
fn sample_estimate_round_trip_and_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    assert!(run(&["sample", "--copula", "gumbel:3", "--n", "500", "--seed", "11", "--out", p]).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(run(&["sample", "--copula", "gumbel:3", "--n", "500", "--seed", "11", "--out", p]).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    let report = json(&["estimate", "--input", p, "--mode", "plugin-arch"]);
    let z = report["zeta1"].as_f64().unwrap();
    assert!((0.60..=0.80).contains(&z), "{z}");
    assert!(report["kendall"]["t"].as_array().unwrap().len() == 101);
}

#[test]
fn estimate_flags_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "x,y\n0.1,nan\n0.2,0.3\n").unwrap();
    let out = run(&["estimate", "--input", path.to_str().unwrap(), "--mode", "chatterjee"]);
    assert_eq!(out.status.code(), Some(2));
    let monotone: String = std::iter::once("x,y".to_owned())
        .chain((0..100).map(|i| format!("{i},{i}")))
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&path, monotone).unwrap();
    let r = json(&["estimate", "--input", path.to_str().unwrap(), "--mode", "chatterjee"])["r"]
        .as_f64()
        .unwrap();
    assert!((r - (1.0 - 3.0 / 101.0)).abs() < 1e-12);
}

#[test]
fn simulate_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (records, summary) = (dir.path().join("r.csv"), dir.path().join("s.json"));
    let out = run(&[
        "simulate", "--copula", "galambos:3", "--sizes", "30,60", "--R", "3", "--seed", "1",
        "--out", records.to_str().unwrap(), "--summary", summary.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&records).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 3);
    assert!(text.starts_with("estimator,n,replication,seed,value,wall_time\n"));
    let s: serde_json::Value = serde_json::from_slice(&std::fs::read(&summary).unwrap()).unwrap();
    assert_eq!(s["cells"].as_array().unwrap().len(), 4);
}
