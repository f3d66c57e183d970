use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_waveguide");

fn waveguide(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("WAVEGUIDE_THREADS", "2").output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const ZERO: &str = r#"
experiment = "simulate"
seed = 3
[grid]
box_length_x = 20.0
nx = 16
ny = 4
[solver]
dt = 0.05
t_end = 0.5
slice_stride = 2
[data]
family = "zero"
"#;

const SCAN: &str = r#"
experiment = "approx_scan"
[grid]
box_length_x = 20.0
nx = 32
ny = 8
[solver]
dt = 0.02
[data]
family = "gaussian_trig"
amplitude = 0.5
width = 2.0
y_coeff = 0.3
y_mode = 1
[approx_scan]
lambdas = [2.0, 4.0, 8.0]
horizon = 0.5
jmax = 2
stride = 5
"#;

const MORAWETZ: &str = r#"
experiment = "morawetz"
[grid]
box_length_x = 64.0
nx = 64
ny = 4
[solver]
dt = 0.05
t_end = 0.5
slice_stride = 2
[data]
family = "gaussian_trig"
amplitude = 0.3
width = 3.0
[morawetz]
r0 = 0.01
"#;

#[test]
fn list_experiments_names_every_kind() {
    let out = waveguide(&["list-experiments"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["simulate", "resonant", "approx_scan", "morawetz", "profiles", "perturbation"] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = waveguide(&["validate", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn invalid_config_exits_2_with_line() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = ZERO.replace("dt = 0.05", "dt = -1.0");
    let cfg = write_config(tmp.path(), "bad.toml", &bad);
    let out = waveguide(&["validate", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 9:") && err.contains("solver.dt"), "{err}");

    let unknown = write_config(tmp.path(), "unknown.toml", &format!("{ZERO}\n[grid2]\nx = 1\n"));
    assert_eq!(waveguide(&["run", &unknown]).status.code(), Some(2));

    let out = waveguide(&["validate", tmp.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_data_gives_zero_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "zero.toml", ZERO);
    let out_dir = tmp.path().join("out");
    let out = waveguide(&["run", &cfg, "--output", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&out_dir);
    assert_eq!(m["status"], "completed");
    let hash = m["config_hash"].as_str().unwrap().to_owned();
    let mut rdr = csv::Reader::from_path(out_dir.join("diagnostics.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "config_hash");
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[0], hash);
        for (h, v) in headers.iter().zip(rec.iter()).skip(2) {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0, "{h}");
        }
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn divergence_exits_3_with_partial_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let body = r#"
experiment = "simulate"
[grid]
box_length_x = 10.0
nx = 16
ny = 4
[solver]
dt = 0.05
t_end = 1.0
dealias_on = true
[data]
family = "gaussian_trig"
amplitude = 8.0
width = 0.5
"#;
    let cfg = write_config(tmp.path(), "div.toml", body);
    let out_dir = tmp.path().join("out");
    let out = waveguide(&["run", &cfg, "--output", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let m = manifest(&out_dir);
    assert_eq!(m["status"], "numerical_failure");
    assert!(m["message"].as_str().unwrap().contains("divergence"));
    assert!(out_dir.join("diagnostics.csv").exists());
}

#[test]
fn approx_scan_lists_one_row_per_lambda() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "scan.toml", SCAN);
    let out_dir = tmp.path().join("out");
    let out = waveguide(&["run", &cfg, "--output", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&out_dir);
    let entry = m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["file"] == "approx_scan.csv")
        .unwrap();
    assert_eq!(entry["rows"], 3);
    let mut rdr = csv::Reader::from_path(out_dir.join("approx_scan.csv")).unwrap();
    let lambdas: Vec<f64> = rdr.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(lambdas, vec![2.0, 4.0, 8.0]);
}

#[test]
fn r0_override() {
    let tmp = tempfile::tempdir().unwrap();
    let zero = write_config(tmp.path(), "zero.toml", ZERO);
    assert_eq!(waveguide(&["run", &zero, "--r0", "0.1"]).status.code(), Some(2));

    let cfg = write_config(tmp.path(), "morawetz.toml", MORAWETZ);
    let out_dir = tmp.path().join("out");
    assert_eq!(waveguide(&["run", &cfg, "--r0", "-1"]).status.code(), Some(2));
    let out = waveguide(&["run", &cfg, "--r0", "0.05", "--output", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(manifest(&out_dir)["config"]["morawetz"]["r0"], 0.05);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "zero.toml", &ZERO.replace("\"zero\"", "\"random_smooth\""));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        assert!(waveguide(&["run", &cfg, "--output", dir.to_str().unwrap()]).status.success());
    }
    assert_eq!(fs::read(a.join("diagnostics.csv")).unwrap(), fs::read(b.join("diagnostics.csv")).unwrap());
}
