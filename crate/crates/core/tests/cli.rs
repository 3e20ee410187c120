use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nvosc::{characteristic_poly, OscillatorParams};
use num_complex::Complex64;
use serde_json::Value;

const REFERENCE: &str = r#"{
  "params": {"m": 1.0, "c": 0.5, "k": 4.0, "mu": 2.0},
  "initial": {"x0": 1.0, "v0": 0.3},
  "history": {"type": "constant", "a": 1.0, "value": 1.0},
  "grid": {"t_end": 20.0, "dt": 0.001}
}"#;

fn osc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osc")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_rows(path: &str) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn eigen_factored_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"params": {"m": 1, "c": 0, "k": 1, "mu": 2}}"#);
    let out = osc(&["eigen", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let pair = |v: &Value| (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap());
    let roots: Vec<_> = doc["roots"].as_array().unwrap().iter().map(pair).collect();
    let residues: Vec<_> = doc["residues"].as_array().unwrap().iter().map(pair).collect();
    let expected_roots = [(0.0, 1.0), (0.0, -1.0), (-2.0, 0.0)];
    let expected_residues = [(0.0, -0.5), (0.0, 0.5), (0.0, 0.0)];
    for (got, want) in roots.iter().zip(&expected_roots).chain(residues.iter().zip(&expected_residues)) {
        assert!((got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12, "{got:?} vs {want:?}");
    }
    assert_eq!(doc["oscillatory"], Value::Bool(true));
    let text = String::from_utf8(out.stdout).unwrap();
    let positions: Vec<usize> = ["\"roots\"", "\"residues\"", "\"alpha\"", "\"beta\"", "\"gamma\"", "\"oscillatory\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn eigen_reference_roots_resubstitute() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.json", REFERENCE);
    let out = osc(&["eigen", "--config", &cfg]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let poly = characteristic_poly(&OscillatorParams::new(1.0, 0.5, 4.0, 2.0).unwrap());
    for r in doc["roots"].as_array().unwrap() {
        let s = Complex64::new(r["re"].as_f64().unwrap(), r["im"].as_f64().unwrap());
        assert!(poly.eval(s).norm() < 1e-10);
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"params": {"m": 1.0, "c": 0.5, "mu": 2.0}}"#);
    let out = osc(&["eigen", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("`k`"), "{}", stderr(&out));

    let cfg = write(dir.path(), "neg.json", r#"{"params": {"m": 1.0, "c": 0.5, "k": -4.0, "mu": 2.0}}"#);
    let out = osc(&["eigen", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("params.k"), "{}", stderr(&out));

    let out = osc(&["respond", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let cfg = write(dir.path(), "nogrid.json", r#"{"params": {"m": 1, "c": 0.5, "k": 4, "mu": 2}}"#);
    assert_eq!(code(&osc(&["respond", "--config", &cfg])), 2);
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--dt", "0.1"])), 2);
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--dt", "-0.1", "--t-end", "1"])), 2);
}

#[test]
fn spectrum_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // p(s) = (s + 1)^2 (s + 2)
    let cfg = write(dir.path(), "double.json", r#"{"params": {"m": 1, "c": 1.125, "k": 0.5, "mu": 4}, "grid": {"t_end": 1, "dt": 0.01}}"#);
    let out = osc(&["eigen", "--config", &cfg]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert_eq!(code(&osc(&["respond", "--config", &cfg])), 3);

    let cfg = write(dir.path(), "overdamped.json", r#"{"params": {"m": 1, "c": 10, "k": 1, "mu": 50}, "grid": {"t_end": 1, "dt": 0.01}}"#);
    assert_eq!(code(&osc(&["eigen", "--config", &cfg])), 0);
    let out = osc(&["bounds", "--config", &cfg]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).to_lowercase().contains("oscillatory"), "{}", stderr(&out));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.json", REFERENCE);
    let target = dir.path().join("no/such/dir/out.csv");
    let out = osc(&["respond", "--config", &cfg, "--out", target.to_str().unwrap()]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn coarse_oracle_step_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.json", REFERENCE);
    let out = osc(&["oracle", "--config", &cfg, "--dt", "0.1", "--out", dir.path().join("o.csv").to_str().unwrap()]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));
}

#[test]
fn grid_mismatch_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.json", REFERENCE);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--t-end", "1", "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--t-end", "1", "--dt", "0.002", "--out", b.to_str().unwrap()])), 0);
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--t-end", "0.5", "--dt", "0.0005", "--out", c.to_str().unwrap()])), 0);
    assert_eq!(code(&osc(&["compare", a.to_str().unwrap(), b.to_str().unwrap()])), 6);
    // same row count, different times
    assert_eq!(code(&osc(&["compare", a.to_str().unwrap(), c.to_str().unwrap()])), 6);
}

#[test]
fn undamped_cosine_row_at_pi() {
    let dir = tempfile::tempdir().unwrap();
    let pi = std::f64::consts::PI;
    let cfg = write(
        dir.path(),
        "u.json",
        &format!(r#"{{"params": {{"m": 1, "c": 0, "k": 1, "mu": 2}}, "initial": {{"x0": 1, "v0": 0}}, "grid": {{"t_end": {}, "dt": {}}}}}"#, pi, pi / 1000.0),
    );
    for cmd in ["respond", "oracle"] {
        let out_path = dir.path().join(format!("{cmd}.csv"));
        let out = osc(&[cmd, "--config", &cfg, "--out", out_path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let rows = read_rows(out_path.to_str().unwrap());
        let last = rows.last().unwrap();
        assert!((last[0] - pi).abs() < 1e-12);
        assert!((last[1] + 1.0).abs() < 1e-9, "{cmd}: {}", last[1]);
    }
}

#[test]
fn zero_scenario_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "z.json", r#"{"params": {"m": 1, "c": 0.5, "k": 4, "mu": 2}, "grid": {"t_end": 5, "dt": 0.01}}"#);
    for cmd in ["respond", "oracle"] {
        let out_path = dir.path().join(format!("{cmd}.csv"));
        assert_eq!(code(&osc(&[cmd, "--config", &cfg, "--out", out_path.to_str().unwrap()])), 0);
        let rows = read_rows(out_path.to_str().unwrap());
        assert_eq!(rows.len(), 501);
        assert!(rows.iter().all(|r| r[1..].iter().all(|&v| v == 0.0)));
    }
    let table = dir.path().join("b.csv");
    let out = osc(&["bounds", "--config", &cfg, "--out", table.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("t,I1_abs,B1,I2_abs,B2,ok1,ok2\n"));
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert!(cells[1..5].iter().all(|c| c.parse::<f64>().unwrap() == 0.0));
        assert_eq!(&cells[5..], ["true", "true"]);
    }
}

fn reference_pair(dir: &Path) -> (PathBuf, PathBuf) {
    let cfg = write(dir, "r.json", REFERENCE);
    let respond = dir.join("respond.csv");
    let oracle = dir.join("oracle.csv");
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--out", respond.to_str().unwrap()])), 0);
    assert_eq!(code(&osc(&["oracle", "--config", &cfg, "--out", oracle.to_str().unwrap()])), 0);
    (respond, oracle)
}

#[test]
fn respond_matches_oracle_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (respond, oracle) = reference_pair(dir.path());
    let a = read_rows(respond.to_str().unwrap());
    let b = read_rows(oracle.to_str().unwrap());
    assert_eq!(a.len(), 20_001);
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() < 1e-6);
        }
    }
    let header = std::fs::read_to_string(&respond).unwrap();
    assert!(header.starts_with("t,x,xdot,psi\n"));
    assert!(!header.contains('\r'));

    let out = osc(&["compare", respond.to_str().unwrap(), oracle.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["max_abs_diff_x"].as_f64().unwrap() < 1e-6);
    assert_eq!(doc["rows"], 20_001);
}

#[test]
fn compare_file_with_itself() {
    let dir = tempfile::tempdir().unwrap();
    let (respond, _) = reference_pair(dir.path());
    let out = osc(&["compare", respond.to_str().unwrap(), respond.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["max_abs_diff_x"], 0.0);
    assert_eq!(doc["max_abs_diff_xdot"], 0.0);
}

#[test]
fn reference_bounds_all_ok() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.json", REFERENCE);
    let table = dir.path().join("bounds.csv");
    let out = osc(&["bounds", "--config", &cfg, "--out", table.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["all_satisfied"], true);
    assert_eq!(summary["rows"], 20_001);
    let text = std::fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 20_002);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true,true")));
}

#[test]
fn forcing_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let samples: String = (0..=200)
        .map(|i| {
            let t = i as f64 * 0.05;
            format!("{t},{}\n", (2.0 * t).sin())
        })
        .collect();
    write(dir.path(), "f.csv", &format!("t,f\n{samples}"));
    let cfg = write(
        dir.path(),
        "forced.json",
        r#"{"params": {"m": 1, "c": 0.5, "k": 4, "mu": 2}, "forcing": {"type": "samples", "path": "f.csv"},
            "grid": {"t_end": 10, "dt": 0.05}}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(code(&osc(&["respond", "--config", &cfg, "--dt", "0.005", "--out", a.to_str().unwrap()])), 0);
    let out = osc(&["oracle", "--config", &cfg, "--dt", "0.001", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // both paths see the same piecewise-linear load
    let coarse = read_rows(a.to_str().unwrap());
    let fine = read_rows(b.to_str().unwrap());
    let worst = coarse
        .iter()
        .map(|row| (row[1] - fine[(row[0] / 0.001).round() as usize][1]).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "max |dx| {worst}");
}
