use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dirichlet_eigen::cli::{RunManifest, MANIFEST_NAME, WORKERS_ENV};

fn tool(out: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dirichlet-eigen"));
    if let Some(dir) = out {
        cmd.arg("--out").arg(dir);
    }
    cmd.args(args).env(WORKERS_ENV, "1").output().expect("binary runs")
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_NAME)).unwrap()).unwrap()
}

#[test]
fn certify_m3_prints_true_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = tool(Some(dir.path()), &["certify", "ball-not-minimiser", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("true"));
    let m = manifest(dir.path());
    assert!(m.passed);
    assert_eq!(m.command, "certify ball-not-minimiser");
}

#[test]
fn every_listed_output_exists() {
    let dir = tempfile::tempdir().unwrap();
    let o = tool(Some(dir.path()), &["tables", "corollary5", "--beta", "m+2", "--m-max", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let m = manifest(dir.path());
    assert!(!m.outputs.is_empty());
    for f in &m.outputs {
        assert!(f.is_file(), "{} missing", f.display());
    }
    assert_eq!(m.parameters.get("m_max").map(String::as_str), Some("40"));
}

#[test]
fn identical_arguments_give_identical_csv() {
    let runs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for d in &runs {
        let o = tool(Some(d.path()), &["tables", "theorem2v", "--m-max", "60"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("theorem2v.csv")).unwrap();
    assert_eq!(read(&runs[0]), read(&runs[1]));

    for d in &runs {
        let o = tool(Some(d.path()), &["configs", "--m", "8", "--k", "5", "--beta", "m", "--refined"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("configs.csv")).unwrap();
    assert_eq!(read(&runs[0]), read(&runs[1]));
}

#[test]
fn quadrature_experiment_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = tool(Some(dir.path()), &["experiment", "quadrature"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("quadrature.json").is_file());
}

#[test]
fn failed_check_exits_one() {
    // the fitted rate lands outside the accepted exponent range
    let dir = tempfile::tempdir().unwrap();
    let o = tool(Some(dir.path()), &["experiment", "lemma6", "--h", "0.1", "--eps", "0.1,0.2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!manifest(dir.path()).passed);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = Some(dir.path());
    assert_eq!(tool(None, &["experiment", "quadrature"]).status.code(), Some(2));
    assert_eq!(tool(d, &["no-such-command"]).status.code(), Some(2));
    assert_eq!(tool(d, &["tables", "theorem2v"]).status.code(), Some(2));
    assert_eq!(tool(d, &["torsion-check", "--shape", "triangle"]).status.code(), Some(2));
    assert_eq!(tool(d, &["--tol", "-1", "experiment", "quadrature"]).status.code(), Some(2));
    // domain errors count as usage errors
    assert_eq!(tool(d, &["configs", "--m", "1", "--k", "5", "--beta", "m"]).status.code(), Some(2));
    assert_eq!(tool(d, &["optimize", "--k", "1", "--iters", "1"]).status.code(), Some(2));
}

#[test]
fn in_process_entry_point_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = dirichlet_eigen::cli::run(["dirichlet-eigen", "--out", out, "bounds", "lambda2star", "--m", "5"]);
    assert_eq!(code, 0);
    assert!(dir.path().join("lambda2star.json").is_file());
}
