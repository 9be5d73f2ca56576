use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nlsmode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlsmode")).args(args).output().expect("binary runs")
}

fn record(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON record")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gamma0_prints_value_and_estimate() {
    let out = nlsmode(&["fgr", "gamma0", "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert!((r["gamma0"].as_f64().unwrap() - 18.8870).abs() < 1e-3);
    assert!(r["error_estimate"].as_f64().unwrap() < 1e-6);
    assert_eq!(r["inputs"]["nodes"], 4096);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(nlsmode(&["fgr", "gamma0"]).status.code(), Some(2));
    assert_eq!(nlsmode(&["bogus"]).status.code(), Some(2));
    assert_eq!(nlsmode(&["profile", "--omega", "-1"]).status.code(), Some(2));
    assert_eq!(nlsmode(&["profile", "--omega", "0.01", "--model", "cubic"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "omega = 0.01\nomgea = 2\n").unwrap();
    let out = nlsmode(&["profile", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omgea"));
}

#[test]
fn computation_errors_exit_with_one() {
    let out = nlsmode(&["profile", "--omega", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("g.cfg");
    std::fs::write(&cfg, "sigma = 3\nnodes = 512\n").unwrap();
    let out = nlsmode(&["fgr", "gamma0", "--config", path(&cfg), "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert_eq!(r["inputs"]["sigma"], 2.0);
    assert_eq!(r["inputs"]["nodes"], 512);
}

#[test]
fn scan_writes_full_precision_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let out = nlsmode(&["fgr", "scan", "--from", "1", "--to", "2", "--points", "5", "--nodes", "512", "--jobs", "2", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sigma,gamma0,err");
    assert_eq!(lines.len(), 6);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "1.0000000000000000e0");
    // 17 significant digits: one leading digit and sixteen after the point
    assert!(first.iter().all(|v| v.split('e').next().unwrap().trim_start_matches('-').len() == 18));
    assert!(record(&out)["all_positive"].is_boolean());
}

#[test]
fn identical_inputs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = nlsmode(&["mode", "--omega", "0.02", "--nodes", "1024", "--half-length", "30", "--out", path(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(String::from_utf8_lossy(&ta).starts_with("y,W1,W2,V1,V2,K0,K1,K2,Y0,Y1\n"));
}

#[test]
fn mode_record_has_the_documented_fields() {
    let out = nlsmode(&["mode", "--omega", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    for key in ["omega", "alpha", "lambda", "I_omega", "eps_omega", "rho_omega", "residual_Lplus", "residual_Lminus", "int_Y0", "oracle_lambda"] {
        assert!(r[key].is_number(), "{key}");
    }
    let rel = (r["oracle_lambda"].as_f64().unwrap() - r["lambda"].as_f64().unwrap()).abs();
    assert!(rel < 1e-4);
}

#[test]
fn profile_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let out = nlsmode(&["profile", "--omega", "0.01", "--nodes", "256", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("y,Q,Qp,Qpp\n"));
    assert_eq!(text.lines().count(), 2 * 256 + 2);
}

#[test]
fn general_reports_positivity() {
    let out = nlsmode(&["fgr", "general", "--omega", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert_eq!(r["h3_holds"], true);
    assert!(r["gamma"].as_f64().unwrap() > 0.0);
}

#[test]
fn short_simulation_writes_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sim.csv");
    let out = nlsmode(&["simulate", "--t-end", "4", "--points", "1024", "--domain-half", "100", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,mass_drift,energy_drift,momentum,gamma,omega,b1,b2,abs_b,rho_v_norm,nu_v_norm");
    assert_eq!(lines.len(), 4);
    let r = record(&out);
    assert_eq!(r["partial"], false);
    assert_eq!(r["inputs"]["points"], 1024);
}

#[test]
fn simulation_config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.cfg");
    std::fs::write(&cfg, "omega0 = 0.05\nviscosity = 1\n").unwrap();
    assert_eq!(nlsmode(&["simulate", "--config", path(&cfg)]).status.code(), Some(2));
    assert_eq!(nlsmode(&["simulate", "--points", "1000"]).status.code(), Some(2));
}

#[test]
fn coarse_validation_fails_and_names_the_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = nlsmode(&["validate", "quick", "--nodes", "64", "--out", path(&json)]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("criterion  1 [FAIL]") && l.contains("measured")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 (Gamma0(2) closed form)"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["criteria"].as_array().unwrap().len(), 7);
    assert_eq!(r["criteria"][0]["passed"], false);
}
