//! End-to-end runs of the `netsync` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_netsync");

fn scenario(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_in(cmd: &str, path: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, path.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

const DOUBLE_INTEGRATOR: &str =
    r#"{"system": {"a": [[0, 1], [0, 0]], "b": [[0], [1]]}, "delta": 2}"#;

#[test]
fn synthesize_double_integrator() {
    let dir = TempDir::new().unwrap();
    let path = scenario(&dir, "di.json", DOUBLE_INTEGRATOR);
    let o = run_in("synthesize", &path, dir.path(), &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = stdout_json(&o);
    let k = &report["gain"][0];
    assert!((f(&k[0]) - 1.0).abs() < 1e-9);
    assert!((f(&k[1]) - 3f64.sqrt()).abs() < 1e-9);
    assert_eq!(f(&report["scale"]), 1.0);
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("synthesize.json")).unwrap())
            .unwrap();
    assert_eq!(written, report);
}

#[test]
fn small_delta_raises_scale() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "s.json",
        r#"{"system": {"a": [[0]], "b": [[1]]}, "delta": 0.5}"#,
    );
    let o = run_in("synthesize", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(f(&stdout_json(&o)["scale"]), 2.0);
}

#[test]
fn unstabilizable_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "u.json",
        r#"{"system": {"a": [[1, 0], [0, 1]], "b": [[0], [0]]}, "delta": 1}"#,
    );
    let o = run_in("synthesize", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PBH test failed at eigenvalue λ="));
}

#[test]
fn spectrum_of_shortcut_graphs() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "c4.json",
        r#"{"system": {"a": [[0]], "b": [[1]]}, "graph": "cycle 4"}"#,
    );
    let report = stdout_json(&run_in("spectrum", &path, dir.path(), &[]));
    assert!((f(&report["lambda2"][0]) + 1.0).abs() < 1e-12);

    let path = scenario(
        &dir,
        "k3.json",
        r#"{"system": {"a": [[0]], "b": [[1]]}, "graph": "complete 3"}"#,
    );
    let report = stdout_json(&run_in("spectrum", &path, dir.path(), &[]));
    assert!((f(&report["lambda2"][0]) + 3.0).abs() < 1e-12);
    for r in report["r"].as_array().unwrap() {
        assert!((f(r) - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn two_components_exit_two() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "split.json",
        r#"{"system": {"a": [[0]], "b": [[1]]},
            "graph": {"p": 4, "weights": [[1, 2, 1], [2, 1, 1], [3, 4, 1], [4, 3, 1]]}}"#,
    );
    let o = run_in("spectrum", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not connected"));
}

#[test]
fn consensus_on_complete_graph() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "consensus.json",
        r#"{"system": {"a": [[0]], "b": [[1]]}, "graph": "complete 3",
            "sim": {"horizon": 10, "x0": [1, -2, 4]}}"#,
    );
    let o = run_in("simulate", &path, dir.path(), &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert!(f(&summary["error"]["ratio"]) <= 1e-6);
    assert_eq!(summary["spectrum_check"]["passed"], Value::Bool(true));

    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "time,x_1_1,x_2_1,x_3_1,ref_1,err_1,err_2,err_3");
    // symmetric graph: reference is the plain mean, constant since A = 0
    let first: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert!((first[4] - 1.0).abs() < 1e-12);
}

#[test]
fn identical_initial_states_have_zero_error() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "same.json",
        r#"{"system": {"a": [[0, 1], [0, 0]], "b": [[0], [1]]}, "graph": "cycle 3",
            "sim": {"horizon": 3, "x0": [0.5, -1, 0.5, -1, 0.5, -1]}}"#,
    );
    let o = run_in("simulate", &path, dir.path(), &["--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        for e in &cols[cols.len() - 3..] {
            assert!(e.abs() <= 1e-9);
        }
    }
}

#[test]
fn explicit_delta_above_lambda2_is_rejected() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "weak.json",
        r#"{"system": {"a": [[0]], "b": [[1]]}, "graph": "cycle 4", "delta": 2}"#,
    );
    let o = run_in("simulate", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coupling strength condition violated"));
}

#[test]
fn certify_writes_report() {
    let dir = TempDir::new().unwrap();
    let path = scenario(&dir, "di.json", DOUBLE_INTEGRATOR);
    let o = run_in("certify", &path, dir.path(), &["--grid", "1,10,5,-10,9"]);
    // a negative ωmax is a usage error
    assert_eq!(o.status.code(), Some(1));
    let o = run_in("certify", &path, dir.path(), &["--grid", "1,10,5,10,9"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = stdout_json(&o);
    assert_eq!(report["points"], Value::from(45));
    assert_eq!(report["passed"], Value::Bool(true));
    assert!(dir.path().join("certify.json").exists());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["explode", "x.json"]).status.code(), Some(1));
    assert_eq!(
        run(&["synthesize", "/nonexistent/scenario.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "bad.json",
        r#"{"system": {"a": [[0]], "b": [[1]]}, "extra": 1}"#,
    );
    assert_eq!(
        run_in("synthesize", &path, dir.path(), &[]).status.code(),
        Some(1)
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let path = scenario(
        &dir,
        "rand.json",
        r#"{"system": {"a": [[0, 1], [-1, 0]], "b": [[0], [1]], "mode": "dual"},
            "graph": "random 5 0.4 3", "sim": {"horizon": 4, "seed": 17}}"#,
    );
    let read = |d: &Path| {
        (
            std::fs::read(d.join("trajectory.csv")).unwrap(),
            std::fs::read(d.join("summary.json")).unwrap(),
        )
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = run_in("simulate", &path, &a, &[]);
    let ob = run_in("simulate", &path, &b, &[]);
    assert_eq!(
        oa.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&oa.stderr)
    );
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(read(&a), read(&b));
}
