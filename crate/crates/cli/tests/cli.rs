//! End-to-end tests of the binary: exit codes, determinism, and file
//! schemas on toy-sized configurations.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lindblad-skin"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const SMALL_EVOLVE: &str = r#"{
  "model": {"n_cells": 3, "t1": 0.8, "t2": 1.0, "gamma_l": 0.2, "gamma_g": 0.2,
             "boundary": "open"},
  "task": "evolve",
  "evolve": {"t_max": 5.0, "samples": 11, "initial": "unit_filling"},
  "output": {"dir": "unused", "format": "csv"}
}"#;

#[test]
fn evolve_writes_expected_tables_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "evolve.json", SMALL_EVOLVE);
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["evolve", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read(out1.join("evolve.csv")).unwrap();
    let b = fs::read(out2.join("evolve.csv")).unwrap();
    assert_eq!(a, b, "identical config must give byte-identical output");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,site,delta_g");
    assert_eq!(text.lines().count(), 1 + 11 * 6);
    // initial deviation 1/2 at every site
    for line in text.lines().skip(1).take(6) {
        let delta: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((delta - 0.5).abs() < 1e-9);
    }
    let freq = fs::read_to_string(out1.join("frequency_amplitude.csv")).unwrap();
    assert_eq!(
        freq.lines().next().unwrap(),
        "pair_index,omega_im,site,re_d,im_d"
    );
    // 2N = 12 modes -> 66 pairs x 6 sites
    assert_eq!(freq.lines().count(), 1 + 66 * 6);
}

#[test]
fn task_mismatch_is_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "evolve.json", SMALL_EVOLVE);
    let status = bin().args(["ness", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unknown_key_is_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = SMALL_EVOLVE.replace("\"t1\"", "\"hopping_one\"");
    let cfg = write_config(tmp.path(), "bad.json", &bad);
    let status = bin()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_config_is_config_error() {
    let status = bin()
        .args(["ness", "--config", "/nonexistent/nope.json"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn pumped_large_ness_is_numerical_failure() {
    // asymmetric rates beyond the brute-force limit: refused with exit 1
    let tmp = tempfile::tempdir().unwrap();
    let cfg_text = r#"{
      "model": {"n_cells": 6, "t1": 0.8, "t2": 1.0, "gamma_l": 0.4, "gamma_g": 0.1,
                 "boundary": "open"},
      "task": "ness",
      "output": {"dir": "unused", "format": "csv"}
    }"#;
    let cfg = write_config(tmp.path(), "ness.json", cfg_text);
    let status = bin()
        .args(["ness", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn ness_task_outputs_half_filling() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_text = r#"{
      "model": {"n_cells": 4, "t1": 0.8, "t2": 1.0, "gamma_l": 0.2, "gamma_g": 0.2,
                 "boundary": "open"},
      "task": "ness",
      "output": {"dir": "unused", "format": "json"}
    }"#;
    let cfg = write_config(tmp.path(), "ness.json", cfg_text);
    let out = tmp.path().join("out");
    let status = bin()
        .args(["ness", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("ness.json")).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 8);
    for row in rows.as_array().unwrap() {
        let occ = row["occupation"].as_f64().unwrap();
        assert!((occ - 0.5).abs() < 1e-10);
    }
}

#[test]
fn shipped_configs_round_trip() {
    use lindblad_skin_cli::config::RunConfig;
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let cfg: RunConfig =
            serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.validate().unwrap();
        let serialized = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&serialized).unwrap();
        assert_eq!(cfg, back, "{}", path.display());
        seen += 1;
    }
    assert!(
        seen >= 7,
        "expected the shipped configurations, found {seen}"
    );
}

#[test]
fn custom_covariance_initial_state() {
    let tmp = tempfile::tempdir().unwrap();
    // 1-cell chain, vacuum initial state: dG(0) = -1/2 at both sites
    let n2 = 4;
    let mut cov = vec![vec![[0.0_f64, 0.0]; n2]; n2];
    for (i, row) in cov.iter_mut().enumerate() {
        row[i] = [1.0, 0.0];
    }
    cov[0][1] = [0.0, -1.0];
    cov[1][0] = [0.0, 1.0];
    cov[2][3] = [0.0, -1.0];
    cov[3][2] = [0.0, 1.0];
    let cov_path = tmp.path().join("cov.json");
    fs::write(&cov_path, serde_json::to_string(&cov).unwrap()).unwrap();
    let cfg_text = format!(
        r#"{{
      "model": {{"n_cells": 1, "t1": 0.8, "t2": 1.0, "gamma_l": 0.2, "gamma_g": 0.2,
                 "boundary": "open"}},
      "task": "evolve",
      "evolve": {{"t_max": 2.0, "samples": 5, "initial": {{"custom_covariance": {:?}}}}},
      "output": {{"dir": "unused", "format": "csv"}}
    }}"#,
        cov_path.to_str().unwrap()
    );
    let cfg = write_config(tmp.path(), "evolve.json", &cfg_text);
    let out = tmp.path().join("out");
    let status = bin()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("evolve.csv")).unwrap();
    let first_row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let delta: f64 = first_row[2].parse().unwrap();
    assert!((delta + 0.5).abs() < 1e-9, "vacuum starts at -1/2: {delta}");
}
