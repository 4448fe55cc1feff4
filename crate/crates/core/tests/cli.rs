use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netshare::analytic::{Analytic, AnalyticError, ExactFunctionals, Functionals};
use netshare::experiment::{validate_with, ThetaGrid, ValidationSettings};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_netshare"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn every_shipped_config_runs_at_reduced_size() {
    let tmp = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        seen += 1;
        let out = tmp.path().join(path.file_stem().unwrap());
        let o = run(&["run", "--config", path.to_str().unwrap(), "--realizations", "150", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
        let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["realizations"], 150);
        assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
        for f in manifest["files"].as_array().unwrap() {
            assert!(out.join(f.as_str().unwrap()).is_file());
        }
    }
    assert!(seen >= 6);
}

#[test]
fn coverage_flat_writes_four_curves_with_overlays() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("coverage_flat.toml");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--realizations", "100", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for name in ["none", "infrastructure", "spectrum", "full"] {
        let body = fs::read_to_string(tmp.path().join(format!("{name}.csv"))).unwrap();
        assert!(body.starts_with("theta_db,value,std_err\n"));
        assert_eq!(body.lines().count(), 32);
        assert!(tmp.path().join(format!("{name}-analytic.csv")).is_file());
    }
    assert!(tmp.path().join("plot.gp").is_file());
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("exclusion.toml");
    for dir in ["a", "b"] {
        let out = tmp.path().join(dir);
        let o = run(&["run", "--config", cfg.to_str().unwrap(), "--realizations", "120", "--seed", "5", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let mut compared = 0;
    for entry in fs::read_dir(tmp.path().join("a")).unwrap() {
        let name = entry.unwrap().file_name();
        if name == "manifest.json" {
            continue;
        }
        let a = fs::read(tmp.path().join("a").join(&name)).unwrap();
        let b = fs::read(tmp.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs");
        compared += 1;
    }
    assert!(compared > 5);
}

#[test]
fn seed_override_changes_results() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("coverage_flat.toml");
    let mut bodies = Vec::new();
    for seed in ["1", "2"] {
        let out = tmp.path().join(seed);
        assert_eq!(code(&run(&["run", "--config", cfg.to_str().unwrap(), "--realizations", "100", "--seed", seed, "--out", out.to_str().unwrap()])), 0);
        bodies.push(fs::read_to_string(out.join("none.csv")).unwrap());
    }
    assert_ne!(bodies[0], bodies[1]);
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("c.toml");
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn empty_scenario_list_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write_config(tmp.path(), "seed = 1\n");
    let o = run(&["run", "--config", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no [[scenario]]"));
}

#[test]
fn invalid_config_reports_line() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write_config(
        tmp.path(),
        "seed = 1\n\n[[scenario]]\nname = \"x\"\nsharing = \"spectrum\"\ndensities = [1.0]\nserved_operator = 4\n",
    );
    let o = run(&["run", "--config", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("c.toml:3:"), "{err}");
    assert!(err.contains("served operator"), "{err}");

    let p = write_config(tmp.path(), "seed = 1\nrealizations = -4\n");
    let o = run(&["run", "--config", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("c.toml:2:"));
}

#[test]
fn missing_config_and_bad_flags_exit_with_2() {
    assert_eq!(code(&run(&["run", "--config", "/nonexistent/x.toml"])), 2);
    assert_eq!(code(&run(&["run"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["curve", "--scenario", "full", "--theta-min", "5", "--theta-max", "1", "--step", "1"])), 2);
}

#[test]
fn numerical_failure_exits_with_3() {
    // nine operators exceed the selective closed-form cap
    let tmp = tempfile::tempdir().unwrap();
    let p = write_config(
        tmp.path(),
        "[[scenario]]\nname = \"wide\"\nsharing = \"spectrum\"\nband_mode = \"selective\"\ndensities = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]\ncoverage = false\nanalytic = true\n",
    );
    let o = run(&["run", "--config", p.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn curve_prints_csv() {
    let o = run(&["curve", "--scenario", "infrastructure", "--theta-min", "-10", "--theta-max", "20", "--step", "10"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "theta_db,value,std_err");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[2], "0,0.71803,0");
}

#[test]
fn validate_with_loose_tolerance_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("r.json");
    let o = run(&["validate", "--tolerance", "1.0", "--realizations", "200", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["scenarios"].as_array().unwrap().len(), 8);
}

#[test]
fn validate_with_zero_tolerance_fails() {
    let o = run(&["validate", "--tolerance", "0", "--realizations", "100"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

/// Fault injection: 𝔷 inflated by 40 %.
struct CorruptZeta;

impl Functionals for CorruptZeta {
    fn zeta(&self, theta: f64, alpha: f64, order: u32) -> Result<f64, AnalyticError> {
        Ok(1.4 * ExactFunctionals.zeta(theta, alpha, order)?)
    }

    fn zeta0(&self, theta: f64, alpha: f64, order: u32) -> Result<f64, AnalyticError> {
        ExactFunctionals.zeta0(theta, alpha, order)
    }
}

#[test]
fn corrupted_zeta_fails_validation_by_name() {
    let settings = ValidationSettings {
        realizations: 20_000,
        grid: ThetaGrid {
            min: -10.0,
            max: 20.0,
            step: 5.0,
        },
        ..ValidationSettings::default()
    };
    let good = validate_with(&Analytic::default(), &settings).unwrap();
    assert!(good.passed, "max deviation {}", good.max_deviation());
    let bad = validate_with(&Analytic::with_functionals(CorruptZeta), &settings).unwrap();
    assert!(!bad.passed);
    let failures = bad.failures();
    assert!(failures.contains(&"none-flat"), "{failures:?}");
    assert!(failures.contains(&"full-selective"), "{failures:?}");
}
