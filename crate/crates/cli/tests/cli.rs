//! End-to-end tests of the `appell` binary: report shape, byte stability,
//! exit codes, and the show dumps.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_appell");

fn write_config(dir: &Path, suites: &[&str]) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let config = serde_json::json!({
        "schema": 1,
        "seed": 7,
        "truncation": 6,
        "draws": 20,
        "weight": { "lambda": [2.0] },
        "measures": {
            "gauss1": { "kind": "gaussian", "dim": 1 },
            "pois1": { "kind": "poisson", "intensity": 1.0 }
        },
        "suites": suites
    });
    std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn appell")
}

#[test]
fn run_executes_all_suites_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &[
            "appell-identities",
            "biorthogonality",
            "transforms",
            "wick",
            "remeasure",
            "norms",
            "charlier",
        ],
    );
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["pass"], true);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 7);
    for suite in suites {
        assert_eq!(suite["pass"], true, "suite {}", suite["suite"]);
        assert!(!suite["cases"].as_array().unwrap().is_empty());
        assert!(suite.get("seconds").is_none(), "timings are opt-in");
        for case in suite["cases"].as_array().unwrap() {
            assert!(case["residual"].as_f64().unwrap() <= case["tolerance"].as_f64().unwrap());
        }
    }
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &["wick", "norms"]);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same config and seed must reproduce identical bytes"
    );
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &["norms"]);
    let out = run(&["run", "--config", config.to_str().unwrap(), "--seed", "99"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["seed"], 99);
}

#[test]
fn empty_suite_list_yields_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &[]);
    let out = run(&["run", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "empty suite list must exit 0");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 0);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &[]);
    let out = run(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--suite",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn malformed_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{ "schema": 99, "seed": 1, "measures": {} }"#).unwrap();
    let out = run(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
}

#[test]
fn show_gaussian_b_table() {
    let out = run(&["show", "--object", "appell-b/gaussian/6", "--format", "json"]);
    assert!(out.status.success());
    let dump: Value = serde_json::from_slice(&out.stdout).unwrap();
    let values: Vec<f64> = dump["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(values, vec![1.0, 0.0, -1.0, 0.0, 3.0, 0.0, -15.0]);
}

#[test]
fn show_delta_coefficients_are_scaled_constants() {
    let out = run(&["show", "--object", "delta0/gaussian/4", "--format", "json"]);
    assert!(out.status.success());
    let dump: Value = serde_json::from_slice(&out.stdout).unwrap();
    let values: Vec<f64> = dump["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    // B_n / n! for the standard Gaussian: [1, 0, −1/2, 0, 1/8]
    assert_eq!(values, vec![1.0, 0.0, -0.5, 0.0, 0.125]);
}

#[test]
fn show_empty_sequence_is_a_zero_table() {
    let out = run(&["show", "--object", "empty/1/2", "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(2) {
        assert!(line.trim_end().ends_with(" 0"), "unexpected row: {line}");
    }
}

#[test]
fn show_rejects_unknown_objects() {
    let out = run(&["show", "--object", "what/is/this"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown"));
}
