use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wolfes(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wolfes"))
        .args(args)
        .current_dir(dir)
        .env_remove("WOLFES_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn resolved_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = wolfes(dir.path(), &["resolve"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

fn energies(v: &Value) -> Vec<f64> {
    v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["energy"].as_f64().unwrap())
        .collect()
}

#[test]
fn spectrum_degeneracies_follow_the_shell_count() {
    let dir = resolved_dir();
    let out = wolfes(
        dir.path(),
        &["spectrum", "--g1sq", "3", "--max-quanta", "2"],
    );
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let degeneracies: Vec<u64> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["degeneracy"].as_u64().unwrap())
        .collect();
    assert_eq!(degeneracies, [1, 2, 4]);
    let ground = energies(&v)[0];
    assert!((ground - (2.0 + 5f64.sqrt() / 2.0)).abs() < 1e-10);
    assert_eq!(v["resolved"]["source"], "state file");
    assert!(out.stderr.is_empty());
}

#[test]
fn spectrum_sector_multiplicity_doubles_counts() {
    let dir = resolved_dir();
    let out = wolfes(
        dir.path(),
        &["spectrum", "--max-quanta", "2", "--sector-mult", "2"],
    );
    let degeneracies: Vec<u64> = json(&out)["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["degeneracy"].as_u64().unwrap())
        .collect();
    assert_eq!(degeneracies, [2, 4, 8]);
    assert_eq!(
        code(&wolfes(dir.path(), &["spectrum", "--sector-mult", "3"])),
        2
    );
}

#[test]
fn spectrum_scales_with_omega() {
    let dir = resolved_dir();
    let one = energies(&json(&wolfes(
        dir.path(),
        &["spectrum", "--max-quanta", "4"],
    )));
    let two = energies(&json(&wolfes(
        dir.path(),
        &["spectrum", "--max-quanta", "4", "--omega", "2"],
    )));
    assert_eq!(one.len(), two.len());
    for (a, b) in one.iter().zip(&two) {
        assert!((b - 2.0 * a).abs() <= 1e-10 * b, "{b} vs 2 * {a}");
    }
}

#[test]
fn spectrum_without_state_warns_and_uses_printed_offset() {
    let dir = TempDir::new().unwrap();
    let out = wolfes(
        dir.path(),
        &["spectrum", "--max-quanta", "0", "--format", "csv"],
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "N,energy,degeneracy,triples");
    // 3/2 + δ with δ = sqrt(5)/2
    assert!(lines[1].starts_with("0,2.61803398875,1,"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn resolve_is_idempotent() {
    let dir = resolved_dir();
    let state = dir.path().join("wolfes.state");
    let first = fs::read_to_string(&state).unwrap();
    assert!(first.contains("sho_offset = 1\n"));
    assert!(first.contains("radial_rule = candidate\n"));
    let out = wolfes(dir.path(), &["resolve"]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&state).unwrap(), first);
    let v = json(&out);
    assert_eq!(v["resolved"]["sho_offset"].as_f64(), Some(1.0));
    // 4 couplings x 6 levels for the oscillator, plus 2 radial k² per coupling
    assert_eq!(v["levels"].as_array().unwrap().len(), 72);
}

#[test]
fn resolve_single_coupling_warns_about_reduced_sweep() {
    let dir = TempDir::new().unwrap();
    let out = wolfes(dir.path(), &["resolve", "--sweep", "3"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("reduced sweep"));
}

#[test]
fn state_file_lives_beside_the_config() {
    let dir = TempDir::new().unwrap();
    let sub = dir.path().join("run");
    fs::create_dir(&sub).unwrap();
    let config = sub.join("wolfes.conf");
    fs::write(&config, "# test run\ng1sq = 1\nmax-quanta = 1\n").unwrap();
    let config = config.to_str().unwrap();
    assert_eq!(
        code(&wolfes(dir.path(), &["resolve", "--config", config])),
        0
    );
    assert!(sub.join("wolfes.state").exists());
    assert!(!dir.path().join("wolfes.state").exists());

    let v = json(&wolfes(
        dir.path(),
        &["spectrum", "--config", config, "--g1sq", "0"],
    ));
    assert_eq!(v["params"]["g1_squared"].as_f64(), Some(0.0));
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    assert_eq!(v["resolved"]["source"], "state file");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("bad.conf");
    fs::write(&config, "colour = red\n").unwrap();
    let out = wolfes(
        dir.path(),
        &["spectrum", "--config", config.to_str().unwrap()],
    );
    assert_eq!(code(&out), 2);
    assert_eq!(
        code(&wolfes(
            dir.path(),
            &["spectrum", "--config", "missing.conf"]
        )),
        2
    );
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["spectrum", "--omega", "-1"],
        vec!["spectrum", "--omega", "fast"],
        vec!["verify", "everything"],
        vec!["spectrum", "--format", "xml"],
        vec!["verify", "3d", "--grid-points", "200"],
        vec!["frobnicate"],
        vec![],
    ] {
        assert_eq!(code(&wolfes(dir.path(), &args)), 2, "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_wolfes"))
        .arg("spectrum")
        .current_dir(dir.path())
        .env("WOLFES_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_jacobi_passes_then_fails_at_impossible_tolerance() {
    let dir = resolved_dir();
    let out = wolfes(dir.path(), &["verify", "jacobi"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));

    let out = wolfes(dir.path(), &["verify", "jacobi", "--tol", "1e-12"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let failed: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failed.is_empty());
    // residuals stay visible in the report
    assert!(failed.iter().any(|c| {
        let d = c["measured"].as_f64().unwrap() - c["reference"].as_f64().unwrap();
        d.abs() > 1e-12
    }));
}

#[test]
fn verify_without_state_resolves_in_process() {
    let dir = TempDir::new().unwrap();
    let out = wolfes(dir.path(), &["verify", "spherical"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["resolved"]["source"], "resolved in-process");
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("resolve.")));
    assert!(names.iter().any(|n| n.starts_with("spherical.")));
    assert!(!dir.path().join("wolfes.state").exists());
}

#[test]
fn verify_3d_default_grid_passes() {
    let dir = resolved_dir();
    let out = wolfes(
        dir.path(),
        &["verify", "3d", "--grid-points", "61", "--format", "csv"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let ground = rows
        .iter()
        .find(|r| &r[0] == "3d.E[0]")
        .expect("ground check");
    assert_eq!(&ground[1], "pass");
    let e0: f64 = ground[2].parse().unwrap();
    assert!((e0 - (2.0 + 5f64.sqrt() / 2.0)).abs() < 5e-3);
    assert!(rows.iter().all(|r| &r[1] == "pass"));
}

#[test]
fn hf_check_reports_positive_slope() {
    let dir = TempDir::new().unwrap();
    let out = wolfes(dir.path(), &["hf-check", "--g1sq", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    for n2 in 0..3 {
        let name = format!("hf[n2={n2}].derivative_vs_closed_form");
        let c = checks.iter().find(|c| c["name"] == name.as_str()).unwrap();
        // ω/(6δ) at g₁² = 3
        let want = 1.0 / (3.0 * 5f64.sqrt());
        assert!((c["reference"].as_f64().unwrap() - want).abs() < 1e-10);
        assert!((c["measured"].as_f64().unwrap() - 0.1491).abs() < 1e-3);
    }
    let out = wolfes(dir.path(), &["hf-check", "--g1sq", "0"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn audit_formats_and_out_file() {
    let dir = TempDir::new().unwrap();
    let json_out = wolfes(dir.path(), &["audit", "--g1sq", "3"]);
    assert_eq!(code(&json_out), 0);
    let v = json(&json_out);
    let checks = v["checks"].as_array().unwrap();

    let csv_out = wolfes(dir.path(), &["audit", "--g1sq", "3", "--format", "csv"]);
    assert_eq!(code(&csv_out), 0);
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap(),
        vec![
            "name",
            "status",
            "measured",
            "reference",
            "tolerance",
            "provenance"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), checks.len());
    for (row, c) in rows.iter().zip(checks) {
        assert_eq!(&row[0], c["name"].as_str().unwrap());
        assert_eq!(
            row[2].parse::<f64>().unwrap(),
            c["measured"].as_f64().unwrap()
        );
    }

    let out = wolfes(
        dir.path(),
        &["audit", "--g1sq", "1", "--out", "report.json"],
    );
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let v: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["params"]["g1_squared"].as_f64(), Some(1.0));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = resolved_dir();
    for args in [
        vec!["spectrum", "--g1sq", "7.5"],
        vec!["audit", "--format", "csv"],
        vec!["verify", "jacobi", "--max-quanta", "3"],
    ] {
        let a = wolfes(dir.path(), &args);
        let b = wolfes(dir.path(), &args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}
