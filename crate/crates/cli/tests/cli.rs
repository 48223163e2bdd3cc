use std::process::{Command, Output};

use qclone::analysis::CloneReport;
use qclone::network::{Circuit, GateOp};
use serde_json::Value;

fn qclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclone"))
        .args(args)
        .env_remove("QCLONE_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qclone(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn clone_uqcm_explicit_angles() {
    let r = json(&["clone", "uqcm", "--theta", "1.0", "--phi", "0.3"]);
    assert!((f(&r["scaling_factor"]) - 2.0 / 3.0).abs() < 1e-10);
    assert!((f(&r["fidelity"]) - 5.0 / 6.0).abs() < 1e-10);
    assert_eq!(r["input"]["source"], "explicit");
    assert_eq!(f(&r["input"]["theta"]), 1.0);
    assert_eq!(r["separable"][0]["separable"], false);
}

#[test]
fn clone_gm_seeded() {
    let r = json(&["clone", "gm", "3", "--seed", "7"]);
    assert!((f(&r["scaling_factor"]) - 0.5).abs() < 1e-10);
    assert!(f(&r["marginal_spread"]) < 1e-10);
    assert_eq!(r["separable"].as_array().unwrap().len(), 6);
    assert_eq!(r["input"]["source"], "seed");
    assert_eq!(r["input"]["seed"], 7);
}

#[test]
fn clone_mdim_seeded() {
    let r = json(&["clone", "mdim", "64", "--seed", "1"]);
    assert!((f(&r["scaling_factor"]) - 66.0 / 130.0).abs() < 1e-10);
    assert_eq!(r["n_or_m"], 64);
    let d = json(&["clone", "mdim", "3"]);
    assert_eq!(d["input"]["source"], "default");
    assert!((f(&d["scaling_factor"]) - 5.0 / 8.0).abs() < 1e-10);
}

#[test]
fn clone_registers() {
    let local = json(&["clone", "register-local", "--alpha2", "0.3"]);
    assert_eq!(local["scaled_form"], false);
    assert_eq!(local["separable"][0]["separable"], false);
    let nonlocal = json(&["clone", "register-nonlocal", "--alpha2", "0.99"]);
    assert_eq!(nonlocal["separable"][0]["separable"], true);
    let default = json(&["clone", "register-nonlocal"]);
    assert_eq!(f(&default["input"]["alpha2"]), 0.5);
}

#[test]
fn input_precedence() {
    let both = json(&["clone", "uqcm", "--theta", "0.5", "--seed", "3"]);
    assert_eq!(both["input"]["source"], "explicit");
    assert_eq!(f(&both["input"]["theta"]), 0.5);
    let default = json(&["clone", "uqcm"]);
    assert_eq!(default["input"]["source"], "default");
    assert!((f(&default["input"]["theta"]) - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    assert_eq!(f(&default["input"]["phi"]), 0.0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["clone", "gm", "2", "--seed", "11"][..],
        &[
            "sweep",
            "register-negativity",
            "--alpha2",
            "0:1:21",
            "--method",
            "local",
        ][..],
    ] {
        let a = qclone(args);
        let b = qclone(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn json_round_trips_at_twelve_digits() {
    let out = qclone(&["clone", "gm", "4", "--seed", "5"]);
    let text = stdout(&out);
    let report: CloneReport = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
}

#[test]
fn format_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_qclone"))
        .args(["clone", "uqcm"])
        .env("QCLONE_FORMAT", "csv")
        .output()
        .unwrap();
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["field", "value"]);
    let s = rows.iter().find(|r| r[0] == "scaling_factor").unwrap();
    assert_eq!(s[1], "0.666666666667");

    let table = stdout(&qclone(&["clone", "uqcm", "--format", "table"]));
    assert!(table.lines().next().unwrap().starts_with("field"));
    assert!(table.contains("scaled_form"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qclone(&["clone", "uqcm", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["cloner"], "uqcm");

    let bad = dir.path().join("missing").join("x.csv");
    let out = qclone(&["dump-circuit", "prep1", "--output", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["clone", "uqcm", "--alpha2", "0.5"][..],
        &["clone", "mdim", "3", "--theta", "1"][..],
        &["clone", "mdim", "1"][..],
        &["clone", "mdim", "65"][..],
        &["clone", "gm", "0"][..],
        &["clone", "gm", "9"][..],
        &["clone", "register-local", "--seed", "1"][..],
        &["clone", "register-local", "--alpha2", "1.5"][..],
        &["clone", "uqcm", "--theta", "4"][..],
        &["clone", "uqcm", "--format", "xml"][..],
        &["sweep", "register-negativity", "--alpha2", "1:0:5"][..],
        &["sweep", "register-negativity", "--alpha2", "0:1:1"][..],
        &["sweep", "mdim-scaling", "--m", "1:4"][..],
        &["sweep", "gm-fidelity", "--n", "0:3"][..],
        &["dump-circuit", "copy"][..],
        &["dump-circuit", "prep1", "--n", "2"][..],
        &["frobnicate"][..],
    ] {
        let out = qclone(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(qclone(&["--help"]).status.code(), Some(0));
}

#[test]
fn reproduce_passes() {
    let out = qclone(&["reproduce", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["pass"] == true));
    let pt = &rows[5];
    assert!((f(&pt["computed"]) + 0.039_344_6).abs() < 1e-7);

    let table = stdout(&qclone(&["reproduce"]));
    assert_eq!(table.matches("PASS").count(), 12);
    assert!(table.contains("12/12 checks passed"));
}

#[test]
fn sweep_mdim_scaling() {
    let (header, rows) = csv_rows(&stdout(&qclone(&["sweep", "mdim-scaling", "--m", "2:12"])));
    assert_eq!(header[0], "m");
    assert_eq!(rows.len(), 11);
    let s: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(s.windows(2).all(|w| w[1] < w[0]));
    for (row, m) in rows.iter().zip(2..) {
        let formula = (m as f64 + 2.0) / (2.0 * (m as f64 + 1.0));
        assert!((row[2].parse::<f64>().unwrap() - formula).abs() < 1e-10);
    }
    assert!(s.iter().all(|&x| x > 0.5));
}

#[test]
fn sweep_register_negativity_crossings() {
    let text = stdout(&qclone(&[
        "sweep",
        "register-negativity",
        "--alpha2",
        "0:1:101",
        "--method",
        "nonlocal",
    ]));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["alpha2", "min_pt_eigenvalue", "separable"]);
    assert_eq!(rows.len(), 101);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    let crossings: Vec<f64> = points
        .windows(2)
        .filter(|w| (w[0].1 >= 0.0) != (w[1].1 >= 0.0))
        .map(|w| 0.5 * (w[0].0 + w[1].0))
        .collect();
    assert_eq!(crossings.len(), 2, "{crossings:?}");
    assert!((crossings[0] - 0.0286).abs() < 0.01);
    assert!((crossings[1] - 0.9714).abs() < 0.01);
}

#[test]
fn sweep_gm_fidelity() {
    let (_, rows) = csv_rows(&stdout(&qclone(&["sweep", "gm-fidelity", "--n", "1:8"])));
    assert_eq!(rows.len(), 8);
    for (row, n) in rows.iter().zip(1..) {
        let expect = 2.0 / 3.0 + 1.0 / (3.0 * (n as f64 + 1.0));
        assert!((row[1].parse::<f64>().unwrap() - expect).abs() < 1e-11);
        assert!((row[2].parse::<f64>().unwrap() - expect).abs() < 1e-10);
    }
}

#[test]
fn dump_circuits() {
    let prep = stdout(&qclone(&["dump-circuit", "prep1"]));
    let lines: Vec<&str> = prep.lines().collect();
    assert_eq!(lines[0], "WIDTH 2");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines.iter().filter(|l| l.starts_with("R ")).count(), 3);
    assert_eq!(lines.iter().filter(|l| l.starts_with("CX ")).count(), 2);
    let parsed: Circuit = prep.parse().unwrap();
    assert_eq!(parsed, qclone::network::build_prep_circuit_1());

    for (n, cx) in [(1, 4), (3, 12)] {
        let text = stdout(&qclone(&["dump-circuit", "copy", "--n", &n.to_string()]));
        assert_eq!(text.lines().filter(|l| l.starts_with("CX ")).count(), cx);
        let c: Circuit = text.parse().unwrap();
        assert_eq!(c.width(), 2 * n + 1);
        assert!(c.ops().iter().all(|op| matches!(op, GateOp::Cnot { .. })));
    }
}
