//! The `qcenter` binary: exit codes, output files and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn qcenter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcenter")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const BROKEN_JACOBI: &str = r#"{
  "schema": "qcenter-scenario/1",
  "name": "broken",
  "space": { "n": 2 },
  "lie": {
    "labels": ["e", "h", "f"],
    "brackets": [
      { "left": "e", "right": "f", "value": "h" },
      { "left": "h", "right": "e", "value": "2*e" },
      { "left": "h", "right": "f", "value": "-f" }
    ]
  },
  "hamiltonians": [
    { "basis": "e", "classical": "q2*p1" },
    { "basis": "h", "classical": "q1*p1 - q2*p2" },
    { "basis": "f", "classical": "q1*p2" }
  ],
  "tasks": ["axioms"]
}"#;

#[test]
fn shipped_torus_k2_exits_zero() {
    let out = qcenter(&["run", "preset:torus_k2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scenario torus_k2: PASS"));
    assert!(text.contains("degree  inv-dim  poisson-dim  quantum-rank"));
}

#[test]
fn broken_jacobi_is_a_validation_error_naming_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.json", BROKEN_JACOBI);
    for cmd in ["run", "validate"] {
        let out = qcenter(&[cmd, &path]);
        assert_eq!(code(&out), 3);
        assert!(stderr(&out).contains("Jacobi identity fails on the triple (e, h, f)"), "{}", stderr(&out));
    }
}

#[test]
fn parse_and_io_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write(dir.path(), "bad.json", "{ \"schema\": ");
    assert_eq!(code(&qcenter(&["run", &bad_json])), 2);
    let torus = qcenter::presets::get("torus_k2").unwrap();
    let bad_expr = write(dir.path(), "expr.json", &torus.replace("\"q1*p1\" }", "\"q1*(p1\" }"));
    assert_eq!(code(&qcenter(&["validate", &bad_expr])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&qcenter(&["run", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&qcenter(&["run", "preset:nope"])), 2);
}

#[test]
fn obstructed_lift_exits_one() {
    let text = qcenter::presets::get("sl2_tstar_k2").unwrap().replace(", \"section_shift\": \"hbar^2\"", "");
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "plain.json", &text);
    let out = qcenter(&["run", &path, "--report", "json"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let lift = report["tasks"].as_array().unwrap().iter().find(|t| t["task"] == "lift").unwrap();
    assert_eq!(lift["passed"], false);
    assert_eq!(lift["failures"][0]["order"], 2);
}

#[test]
fn json_reports_are_byte_identical_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = qcenter(&["run", "preset:sl2_tstar_k2", "--report", "json", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["schema"], qcenter::REPORT_SCHEMA);
    assert_eq!(report["parameters"]["test_degree"], 12);
}

#[test]
fn overrides_reach_the_report() {
    let out = qcenter(&["run", "preset:torus_k4", "--truncation", "4", "--max-degree", "4", "--report", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["parameters"]["truncation"], 4);
    assert_eq!(report["parameters"]["max_degree"], 4);
    let centers = report["tasks"].as_array().unwrap().iter().find(|t| t["task"] == "centers").unwrap();
    assert_eq!(centers["summary"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn list_and_validate_presets() {
    let out = qcenter(&["list-presets"]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(str::to_string).collect();
    assert_eq!(names, ["trivial_k2", "torus_k2", "sl2_tstar_k2", "torus_k4"]);
    for n in &names {
        assert_eq!(code(&qcenter(&["validate", &format!("preset:{n}")])), 0);
    }
}
