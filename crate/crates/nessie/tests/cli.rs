// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const POINT: &str = r#"
mode = "point"
[system]
statistics = "boson"
kappa = 3.0
[baths]
t_bar = 0.5
gamma_bar = 0.1
"#;

fn recipes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/recipes")
}

fn nessie(config: &Path, out: &Path, extra: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nessie"));
    cmd.arg("run").arg(config).arg("--output-dir").arg(out).args(extra);
    cmd.env_remove("NESSIE_SEED");
    if let Some(s) = seed {
        cmd.env("NESSIE_SEED", s);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn point_mode_equilibrium_row() {
    let tmp = tempfile::tempdir().unwrap();
    let out = nessie(&write_config(tmp.path(), POINT), &tmp.path().join("out"), &[], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&tmp.path().join("out/point.csv"));
    assert_eq!(rows.len(), 1);
    let get = |name: &str| -> String { rows[0][header.iter().position(|h| h == name).unwrap()].clone() };
    for col in ["C", "I2", "I3", "current1", "current2", "sigma_b"] {
        assert!(!get(col).is_empty(), "{col} empty");
    }
    assert!(get("sigma_b").parse::<f64>().unwrap().abs() < 1e-12);
    assert!(get("C").parse::<f64>().unwrap() > 0.0);
    let m = manifest(&tmp.path().join("out"));
    assert_eq!(m["seed_source"], "default");
    assert_eq!(m["config"]["optimizer"]["restarts"], 200);
    assert!(m["diagnostics"]["worst_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn config_errors_exit_one_and_name_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (POINT.replace("t_bar = 0.5", "t_bar = 0.5\nt1 = 0.2\nt2 = 0.8"), "baths.t_bar"),
        (POINT.replace("kappa = 3.0", "kappa = 2.0"), "system.kappa"),
        (POINT.replace("gamma_bar = 0.1", "gamma_bar = 0.1\ngama = 1"), "gama"),
        (POINT.replace("\"boson\"", "\"anyon\""), "anyon"),
    ];
    for (text, key) in cases {
        let out = nessie(&write_config(tmp.path(), &text), &tmp.path().join("out"), &[], None);
        assert_eq!(out.status.code(), Some(1), "{key}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(key), "{key} not in {err}");
    }
    let out = nessie(&write_config(tmp.path(), POINT), &tmp.path().join("out"), &[], Some("abc"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NESSIE_SEED"));
}

#[test]
fn point_mode_degenerate_steady_state_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let text = POINT.replace("gamma_bar = 0.1", "gamma_bar = 0.0");
    let out = nessie(&write_config(tmp.path(), &text), &tmp.path().join("out"), &[], None);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&tmp.path().join("out"));
    assert!(m["error"].as_str().unwrap().contains("not unique"));
}

#[test]
fn sweep_records_row_errors_and_reruns_byte_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let text = POINT.replace("mode = \"point\"", "mode = \"sweep\"\nobservables = [\"C\", \"I2\", \"I3\"]")
        + "[sweep]\naxis1 = { name = \"dT\", start = -1.0, stop = 1.0, points = 21 }\n";
    let cfg = write_config(tmp.path(), &text);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(nessie(&cfg, &a, &["--threads", "1"], None).status.success());
    assert!(nessie(&cfg, &b, &["--threads", "4"], None).status.success());
    let bytes_a = std::fs::read(a.join("sweep.csv")).unwrap();
    assert_eq!(bytes_a, std::fs::read(b.join("sweep.csv")).unwrap());

    let (header, rows) = read_csv(&a.join("sweep.csv"));
    assert_eq!(header.first().map(String::as_str), Some("dT"));
    assert_eq!(header.last().map(String::as_str), Some("err"));
    assert_eq!(rows.len(), 21);
    assert!(rows[0].last().unwrap().contains("T2"));
    assert!(rows[20].last().unwrap().contains("T1"));
    assert_eq!(manifest(&a)["diagnostics"]["failed_rows"], 2);

    let c = tmp.path().join("c");
    assert!(nessie(&cfg, &c, &[], Some("7")).status.success());
    let m = manifest(&c);
    assert_eq!(m["seed"], 7);
    assert_eq!(m["seed_source"], "env");
}

#[test]
fn figure_sweep_has_expected_shape_and_invariants() {
    let tmp = tempfile::tempdir().unwrap();
    let out = nessie(&recipes().join("b_neq_dT.toml"), tmp.path(), &[], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&tmp.path().join("sweep.csv"));
    assert_eq!(rows.len(), 201);
    for col in ["dT", "C", "I2", "I3", "sigma_b", "err"] {
        assert!(header.iter().any(|h| h == col), "missing {col}");
    }
    let idx = |name: &str| header.iter().position(|h| h == name).unwrap();
    let num = |row: &[String], name: &str| row[idx(name)].parse::<f64>().ok();
    // spot-check one row in a hundred on load-back
    for row in rows.iter().skip(1).step_by(100) {
        let (c, i2, i3) = (num(row, "C").unwrap(), num(row, "I2").unwrap(), num(row, "I3").unwrap());
        assert!((0.0..=1.0).contains(&c) && (0.0..=1.0).contains(&i2) && (0.0..=1.0).contains(&i3));
        assert!(i2 <= 1e-6 || c > 1e-6);
        assert!(num(row, "balance").unwrap() < 1e-9);
        assert!(num(row, "residual").unwrap() < 1e-10);
    }
}

#[test]
fn cntd_mode_writes_three_results() {
    let tmp = tempfile::tempdir().unwrap();
    let out = nessie(&recipes().join("cntd_point.toml"), tmp.path(), &[], None);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("cntd.json")).unwrap()).unwrap();
    let entries = v["cntd"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let dt0 = |k: usize| entries[k]["result"]["delta_t0"].as_f64().unwrap();
    assert!(dt0(0) > 0.0 && dt0(0) < dt0(1));
    assert!(entries.iter().all(|e| e["result"]["stationary"] == true));
}

#[test]
fn rectmap_mode_writes_table_and_fit() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(recipes().join("contour_dT.toml"))
        .unwrap()
        .replace("points = 21", "points = 3");
    let out = nessie(&write_config(tmp.path(), &text), &tmp.path().join("out"), &[], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&tmp.path().join("out/rectmap.csv"));
    assert_eq!(header, ["deps", "dgamma", "R", "dT0_C", "dT0_I2", "err"]);
    assert_eq!(rows.len(), 9);
    let fit: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("out/rectmap_fit.json")).unwrap()).unwrap();
    assert!(fit["fit"]["slope"].as_f64().unwrap() > 0.0);
}

#[test]
fn every_recipe_parses() {
    let mut n = 0;
    for entry in std::fs::read_dir(recipes()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            nessie::config::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 14);
}
