use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinshift"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file present")
}

fn as_f64(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn spectrum_hs_sector_two_matches_golden() {
    let out = run(&["spectrum", "--model", "hs", "--n", "4", "--j0", "1", "--sector", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("spectrum_hs_n4_r2.json"));
}

#[test]
fn spectrum_report_shape() {
    let out = run(&["spectrum", "--model", "hs", "--n", "4", "--sector", "2"]);
    let v = json(&out);
    for key in ["command", "config", "results", "checks", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let pred = &v["results"][0]["predictions"][0];
    assert_eq!(as_f64(&pred["energy"]), -24.0);
    assert!(as_f64(&pred["gap"]) < 1e-10);
}

#[test]
fn xxx_one_magnon_spectrum() {
    let out = run(&["spectrum", "--model", "xxx", "--n", "4", "--sector", "1"]);
    assert_eq!(code(&out), 0);
    let eigs: Vec<f64> = json(&out)["results"][0]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(as_f64)
        .collect();
    for (got, want) in eigs.iter().zip([-2.0, -1.0, -1.0, 0.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["spectrum", "--model", "hs", "--n", "3"],
        vec!["verify", "--model", "xxx", "--n", "2"],
        vec!["bethe", "--n", "4", "--qn", "0.5,-0.5"],
        vec!["bethe", "--n", "4", "--qn", "5/2"],
        vec!["resonance", "--e1", "1", "--omega-min", "2", "--omega-max", "1"],
        vec!["resonance", "--e1", "1", "--points", "0"],
        vec!["spectrum", "--n", "4", "--sector", "9"],
        vec!["spectrum", "--n", "4", "--format", "xml"],
        vec!["verify"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn bethe_two_magnon_golden_csv() {
    let out = run(&["bethe", "--n", "4", "--qn", "3/2,-3/2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("bethe_n4_csv.txt"));
}

#[test]
fn bethe_single_magnon() {
    let out = run(&["bethe", "--n", "8", "--qn", "1"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["results"][0];
    let theta = as_f64(&r["thetas"][0]);
    assert!((theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    let e = as_f64(&r["energy"]);
    assert!((e - (std::f64::consts::FRAC_PI_4.cos() - 1.0)).abs() < 1e-15);
}

#[test]
fn bethe_degenerate_roots_exit_one() {
    let out = run(&["bethe", "--n", "4", "--qn", "1/2,-1/2"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["results"][0]["status"], "degenerate_roots");
    assert_eq!(v["checks"][0]["passed"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("coincide"));
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "--model", "hs", "--n", "4", "--tol", "1e-9"],
        vec!["verify", "--model", "xxx", "--n", "6", "--samples", "10"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn verify_with_impossible_tolerance_exits_one() {
    let out = run(&["verify", "--model", "xxx", "--n", "6", "--samples", "2", "--tol", "1e-300"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_is_byte_identical_across_runs_and_threads() {
    let args = ["verify", "--model", "xxx", "--n", "6", "--seed", "17", "--samples", "10"];
    let a = run(&args);
    let b = run(&args);
    let c = run_env(&args, "SPINSHIFT_THREADS", "1");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let other_seed = run(&["verify", "--model", "xxx", "--n", "6", "--seed", "18", "--samples", "10"]);
    assert_ne!(a.stdout, other_seed.stdout);
}

#[test]
fn bad_thread_variable_is_usage_error() {
    let out = run_env(&["verify", "--n", "4"], "SPINSHIFT_THREADS", "many");
    assert_eq!(code(&out), 2);
}

#[test]
fn resonance_two_level_peak() {
    let out = run(&["resonance", "--e0", "0", "--e1", "1.5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,peak_transfer"));
    let best = lines
        .map(|l| {
            let (w, p) = l.split_once(',').unwrap();
            (w.parse::<f64>().unwrap(), p.parse::<f64>().unwrap())
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((best.0 - 1.5).abs() < 1e-12);
    assert!(best.1 >= 0.999);
}

#[test]
fn resonance_xxx_ladder_peaks_at_two_j() {
    let out = run(&["resonance", "--model", "xxx", "--n", "4", "--points", "21"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["results"][0];
    assert!((as_f64(&r["best_omega"]) - 2.0).abs() < 1e-12);
    assert!((as_f64(&r["energies"][1]) + 2.0).abs() < 1e-12);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("spinshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&["bethe", "--n", "8", "--qn", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"command\": \"bethe\""));
    std::fs::remove_dir_all(&dir).unwrap();
}
