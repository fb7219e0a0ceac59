use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SMALL_FIT: &str = r#"
[fit]
n_gaussians = 4
l_max = 2
r_max = 20.0
energies = [0.5, 1.0]
starts = 1
max_iterations = 40
residual_ceiling = 1.0
grid_points = 200

[continuum]
l_max = 2

[sweep]
betas = [0.1, 0.5]
"#;

fn cgint(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgint"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

/// A temp dir holding `small.toml` and a fitted `basis.json`.
fn fitted() -> TempDir {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "small.toml", SMALL_FIT);
    let out = cgint(dir.path(), &["fit", "--config", "small.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

#[test]
fn fit_writes_basis_and_report() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "small.toml", SMALL_FIT);
    let out = cgint(dir.path(), &["fit", "--config", "small.toml", "--basis", "b.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["n_gaussians"], 4);
    assert_eq!(report["charge"], 1.0);
    assert_eq!(report["soft_failure"], false);
    let residuals = report["residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 3);
    assert!(residuals.iter().all(|r| r.as_array().unwrap().len() == 2));
    assert!(dir.path().join("b.json").exists());

    let again = cgint(dir.path(), &["fit", "--config", "small.toml", "--basis", "c.json"]);
    let a = std::fs::read(dir.path().join("b.json")).unwrap();
    let b = std::fs::read(dir.path().join("c.json")).unwrap();
    assert_eq!(a, b, "same seed must give identical basis files");
    assert_eq!(report["basis_digest"], json(&again)["basis_digest"]);

    let other = cgint(dir.path(), &["fit", "--config", "small.toml", "--basis", "d.json", "--seed", "8"]);
    assert_eq!(json(&other)["seed"], 8);
}

#[test]
fn fit_soft_failure_exits_nonzero_but_keeps_basis() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "tight.toml", &SMALL_FIT.replace("residual_ceiling = 1.0", "residual_ceiling = 1e-12"));
    let out = cgint(dir.path(), &["fit", "--config", "tight.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["soft_failure"], true);
    assert!(dir.path().join("basis.json").exists());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "dec.toml", "[fit]\nenergies = [1.0, 0.5]\n");
    write(dir.path(), "typo.toml", "[fit]\nn_gausians = 3\n");
    for args in [
        &["fit", "--config", "dec.toml"][..],
        &["fit", "--config", "typo.toml"],
        &["validate", "--basis", "missing.json"],
        &["identities", "--only", "no_such_suite"],
    ] {
        let out = cgint(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn amplitude_reports_both_paths() {
    let dir = fitted();
    let out = cgint(dir.path(), &["amplitude", "--config", "small.toml"]);
    assert!(out.status.success());
    let r = json(&out);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row["sph_cart_disc"].as_f64().unwrap() < 1e-10);
        assert_eq!(row["spherical"]["partials"].as_array().unwrap().len(), 9);
        assert_eq!(row["digest"].as_str().unwrap().len(), 16);
    }

    write(dir.path(), "px.toml", &format!("{SMALL_FIT}\n[state]\nkind = \"cgtf\"\npowers = [1, 0, 0]\nbeta = 0.3\n"));
    let r = json(&cgint(dir.path(), &["amplitude", "--config", "px.toml"]));
    for row in r["rows"].as_array().unwrap() {
        assert!(row["sph_cart_disc"].as_f64().unwrap() < 1e-10);
    }

    write(dir.path(), "k.toml", &format!("{SMALL_FIT}\n[state]\nbeta = 0.2\n\n[continuum]\nl_max = 2\nk_e = 0.7\n"));
    assert_eq!(cgint(dir.path(), &["amplitude", "--config", "k.toml"]).status.code(), Some(2));
}

#[test]
fn validate_reports_errors_per_truncation() {
    let dir = fitted();
    write(dir.path(), "one.toml", &SMALL_FIT.replace("l_max = 2\n\n[sweep]", "l_max = 2\nk_e = 1.0\n\n[sweep]"));
    let out = cgint(dir.path(), &["validate", "--config", "one.toml", "--tol-rel", "1e-7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row["k_e"], 1.0);
    let by_l = row["rel_err_by_l"].as_array().unwrap();
    assert_eq!(by_l.len(), 3);
    assert_eq!(row["rel_err"], by_l[2]);
    assert_eq!(row["oracle"]["converged"], true);
    assert!(row["non_monotonic_at"].is_array());
}

#[test]
fn sweep_is_a_deterministic_csv() {
    let dir = fitted();
    let a = cgint(dir.path(), &["sweep", "--config", "small.toml", "--threads", "2"]);
    assert!(a.status.success());
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k_e,beta,L,|T|²_sph,|T|²_cart,|T|²_num,rel_err,sph_cart_disc,digest");
    assert_eq!(lines.len(), 1 + 2 * 2);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&first[..3], ["0.5", "0.1", "2"]);
    assert!(first[3..8].iter().all(|c| c.parse::<f64>().is_ok()));
    assert!(first[8].len() == 16 && first[8].chars().all(|c| c.is_ascii_hexdigit()));

    let out = cgint(dir.path(), &["sweep", "--config", "small.toml", "--out", "s.csv"]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(dir.path().join("s.csv")).unwrap(), text);
}

#[test]
fn identities_report_residuals_and_filter() {
    let dir = TempDir::new().unwrap();
    let out = cgint(dir.path(), &["identities", "--only", "contour_shift", "--only", "gaunt_quadrature"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["all_passed"], true);
    let suites = r["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 2);
    assert_eq!(suites[0]["name"], "contour_shift");
    assert!(suites.iter().all(|s| s["worst_residual"].as_f64().unwrap() <= s["threshold"].as_f64().unwrap()));

    let full = cgint(dir.path(), &["identities", "--seed", "3"]);
    assert!(full.status.success());
    assert_eq!(json(&full)["suites"].as_array().unwrap().len(), 9);
}
