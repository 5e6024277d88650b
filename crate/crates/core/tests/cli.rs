use std::io::Write;
use std::process::{Command, Output};

fn qp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qudit-pauli"))
        .args(args)
        .env_remove("QUDIT_PAULI_DMIN")
        .env_remove("QUDIT_PAULI_DMAX")
        .env_remove("QUDIT_PAULI_FORMAT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const DEMO: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/circuits/sum_demo.qc");

#[test]
fn verify_default_range_passes() {
    let o = qp(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("verify d=2..16 seed="));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_json_records_seed() {
    let o = qp(&["verify", "--dmax", "4", "--seed", "99", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 99);
    assert_eq!(v["passed"], true);
    assert!(v["invariants"].as_array().unwrap().iter().any(|i| i["name"] == "osc-phase/theta_duality"));
}

#[test]
fn inverted_range_is_config_error() {
    let o = qp(&["verify", "--dmin", "5", "--dmax", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dmin"));
    assert_eq!(qp(&["verify", "--tol-unit", "1e-3"]).status.code(), Some(2));
    assert_eq!(qp(&["verify", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(qp(&["verify", "--perturb", "nonsense"]).status.code(), Some(2));
    assert_eq!(qp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn perturbation_fails_with_named_invariant() {
    let o = qp(&["verify", "--dmin", "3", "--dmax", "3", "--perturb", "spin-phase:theta:0:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invariant spin-phase/theta_hermitian failed"), "{}", stderr(&o));
}

#[test]
fn env_and_config_file_precedence() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "dmin = 3\ndmax = 6\nformat = csv").unwrap();
    let path = file.path().to_str().unwrap();

    let o = qp(&["verify", "--config", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("invariant,status,"));

    // Environment stands in for the flag and beats the file.
    let o = Command::new(env!("CARGO_BIN_EXE_qudit-pauli"))
        .args(["verify", "--config", path, "--format", "json"])
        .env("QUDIT_PAULI_DMAX", "4")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["d_min"].as_u64(), v["d_max"].as_u64()), (Some(3), Some(4)));
}

#[test]
fn run_demo_circuit() {
    let o = qp(&["run", DEMO, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let target = v["measurements"].as_array().unwrap().iter().find(|m| m["qudit"] == 1).unwrap().clone();
    assert_eq!(target["encoding"], "phase");
    assert!((target["probabilities"][2].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let text = stdout(&qp(&["run", DEMO]));
    assert!(text.contains("measure qudit 1 (phase basis, line 8)"));
}

#[test]
fn run_errors() {
    let o = qp(&["run", "/nonexistent/circuit.qc"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qc");
    std::fs::write(&bad, "dims 3\nx 0\nwobble 0\n").unwrap();
    let o = qp(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let runtime = dir.path().join("runtime.qc");
    std::fs::write(&runtime, "dims 3 3\nsum 0 1\n").unwrap();
    let o = qp(&["run", runtime.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn table_command() {
    let o = qp(&["table", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3 + 9);
    let o = qp(&["table", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("between 2 and 7"));
}

#[test]
fn limit_output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = qp(&["limit", "--d-list", "4..32", "--format", "csv", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    let ds: Vec<usize> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ds, (4..=32).collect::<Vec<_>>());
    for line in text.lines().skip(1) {
        let weyl: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(weyl < 1e-10);
    }
    assert_eq!(qp(&["limit", "--d-list", "4,8", "--window", "5"]).status.code(), Some(2));
    assert_eq!(qp(&["limit", "--d-list", "8..4"]).status.code(), Some(2));
}

#[test]
fn dump_writes_realizations() {
    let dir = tempfile::tempdir().unwrap();
    let o = qp(&["verify", "--dmin", "2", "--dmax", "3", "--dump", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json = std::fs::read_to_string(dir.path().join("spin-phase-d3.json")).unwrap();
    let r: qudit_pauli::Realization = serde_json::from_str(&json).unwrap();
    assert_eq!(r.dim(), 3);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 8);
}
