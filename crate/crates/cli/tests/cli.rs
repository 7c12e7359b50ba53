use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn waltz(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waltz"))
        .args(args)
        .current_dir(dir)
        .env_remove("WALTZ_NOISE_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn bench_writes_expected_circuits() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&waltz(&["bench", "cuccaro", "--bits", "4"], dir.path()));
    assert!(text.starts_with("qubits 10\n"));
    let text = stdout(&waltz(&["bench", "cnu", "--controls", "2"], dir.path()));
    assert_eq!(text, "qubits 3\nccx 0 1 2\n");
    let args = ["bench", "synthetic", "--qubits", "11", "--gates", "100", "--cx-fraction", "0.6", "--seed", "7"];
    let a = stdout(&waltz(&args, dir.path()));
    let b = stdout(&waltz(&args, dir.path()));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 101);
}

#[test]
fn bench_rejects_missing_parameters() {
    let dir = TempDir::new().unwrap();
    let out = waltz(&["bench", "qram"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = waltz(&["bench", "cuccaro", "--bits", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compile_reports_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    stdout(&waltz(&["bench", "cnu", "--controls", "2", "-o", "c.txt"], dir.path()));
    let report = json(&waltz(&["compile", "c.txt", "-s", "qubit-only-8cx", "-o", "a.jsonl"], dir.path()));
    assert_eq!(report["multi_device_gates"], 8);
    assert_eq!(report["histogram"]["CX_2"], 8);
    stdout(&waltz(&["compile", "c.txt", "-s", "qubit-only-8cx", "-o", "b.jsonl"], dir.path()));
    let a = fs::read(dir.path().join("a.jsonl")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, fs::read(dir.path().join("b.jsonl")).unwrap());

    stdout(&waltz(&["bench", "synthetic", "--qubits", "10", "--gates", "20", "--cx-fraction", "0.5", "-o", "s.txt"], dir.path()));
    let report = json(&waltz(&["compile", "s.txt", "-s", "full-ququart-ccz"], dir.path()));
    assert_eq!(report["n_devices"], 5);
}

#[test]
fn compile_surfaces_capacity_errors() {
    let dir = TempDir::new().unwrap();
    stdout(&waltz(&["bench", "cnu", "--controls", "2", "-o", "c.txt"], dir.path()));
    let out = waltz(&["compile", "c.txt", "-s", "qubit-only-8cx", "--devices", "2"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let out = waltz(&["compile", "missing.txt", "-s", "qubit-only-8cx"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = waltz(&["compile", "c.txt", "-s", "no-such-strategy"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_records_estimates_and_fidelity() {
    let dir = TempDir::new().unwrap();
    stdout(&waltz(&["bench", "cnu", "--controls", "2", "-o", "c.txt"], dir.path()));
    let r = json(&waltz(&["run", "c.txt", "-s", "mixed-radix-ccz", "--n-states", "0"], dir.path()));
    assert!(r["mean_fidelity"].is_null());
    let total = r["total_eps"].as_f64().unwrap();
    let product = r["gate_eps"].as_f64().unwrap() * r["coherence_eps"].as_f64().unwrap();
    assert!((total - product).abs() < 1e-15);

    fs::write(dir.path().join("quiet.json"), r#"{"damping": false, "gate_errors": false}"#).unwrap();
    let args = ["run", "c.txt", "-s", "full-ququart-ccz", "--n-states", "20", "--noise", "quiet.json"];
    let r = json(&waltz(&args, dir.path()));
    assert!((r["mean_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(r["std_error"].as_f64().unwrap() < 1e-9);
    assert_eq!(r["n_states"], 20);
}

#[test]
fn noise_config_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    stdout(&waltz(&["bench", "cnu", "--controls", "2", "-o", "c.txt"], dir.path()));
    fs::write(dir.path().join("perfect.json"), r#"{"single_device_fidelity": 1.0, "multi_device_fidelity": 1.0}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_waltz"))
        .args(["run", "c.txt", "-s", "qubit-only-8cx", "--n-states", "0"])
        .current_dir(dir.path())
        .env("WALTZ_NOISE_CONFIG", "perfect.json")
        .output()
        .unwrap();
    assert_eq!(json(&out)["gate_eps"], 1.0);
    fs::write(dir.path().join("bad.json"), r#"{"t1": 5}"#).unwrap();
    let out = waltz(&["run", "c.txt", "-s", "qubit-only-8cx", "--noise", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_reports_simulation_refusal() {
    let dir = TempDir::new().unwrap();
    stdout(&waltz(&["bench", "cnu", "--controls", "2", "-o", "c.txt"], dir.path()));
    let out = waltz(&["run", "c.txt", "-s", "qubit-only-8cx", "--max-dimension", "4"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ceiling"));
}

fn sweep_rows(args: &[&str], dir: &Path) -> Vec<csv::StringRecord> {
    let text = stdout(&waltz(args, dir));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "family,n_qubits,strategy,axis,axis_value,gate_eps,coherence_eps,total_eps,mean_fidelity,std_error,duration_ns,swap_count,seed,error"
    );
    reader.records().map(|r| r.unwrap()).collect()
}

#[test]
fn size_sweep_has_one_row_per_cell_in_order() {
    let dir = TempDir::new().unwrap();
    let rows = sweep_rows(&["sweep", "--family", "cnu", "--axis", "circuit_size", "--values", "5,6,7,8,9", "--n-states", "0"], dir.path());
    assert_eq!(rows.len(), 15);
    assert_eq!(&rows[0][2], "qubit-only-8cx");
    assert_eq!(&rows[1][2], "mixed-radix-ccz");
    assert_eq!(&rows[14][4], "9.0");
    assert!(rows.iter().all(|r| r[13].is_empty()));
    let again = sweep_rows(
        &["sweep", "--family", "cnu", "--axis", "circuit_size", "--values", "5,6,7,8,9", "--n-states", "0", "--jobs", "1"],
        dir.path(),
    );
    assert_eq!(rows, again);
}

#[test]
fn gate_error_axis_touches_only_ququart_gates() {
    let dir = TempDir::new().unwrap();
    let rows = sweep_rows(
        &["sweep", "--family", "cuccaro", "--size", "2", "--axis", "ququart_gate_error_multiplier", "--values", "1,3", "--n-states", "0"],
        dir.path(),
    );
    let gate_eps = |i: usize| rows[i][5].parse::<f64>().unwrap();
    assert_eq!(gate_eps(0), gate_eps(3));
    assert!(gate_eps(4) < gate_eps(1));
    assert!(gate_eps(5) < gate_eps(2));
}

#[test]
fn coherence_axis_touches_only_upper_levels() {
    let dir = TempDir::new().unwrap();
    let rows = sweep_rows(
        &["sweep", "--family", "cnu", "--size", "3", "--axis", "coherence_multiplier", "--values", "1,5", "--n-states", "0"],
        dir.path(),
    );
    let coherence = |i: usize| rows[i][6].parse::<f64>().unwrap();
    assert_eq!(coherence(0), coherence(3));
    assert!(coherence(5) < coherence(2));
}

#[test]
fn failing_cells_become_error_rows() {
    let dir = TempDir::new().unwrap();
    let rows = sweep_rows(
        &["sweep", "--family", "cnu", "--axis", "circuit_size", "--values", "1,2", "--n-states", "5", "--strategies", "qubit-only-8cx"],
        dir.path(),
    );
    assert_eq!(rows.len(), 2);
    assert!(!rows[0][13].is_empty());
    assert!(rows[0][5].is_empty());
    assert!(rows[1][13].is_empty());
    assert!(!rows[1][8].is_empty());
}

#[test]
fn sweep_validates_its_specification() {
    let dir = TempDir::new().unwrap();
    let bad = [
        vec!["sweep", "--family", "cnu", "--axis", "circuit_size", "--values", "3,2"],
        vec!["sweep", "--family", "cnu", "--axis", "cx_fraction", "--values", "0.1", "--size", "3"],
        vec!["sweep", "--family", "cnu", "--axis", "coherence_multiplier", "--values", "1"],
        vec!["sweep", "--family", "cnu", "--axis", "circuit_size", "--values", "2.5"],
    ];
    for args in bad {
        assert_eq!(waltz(&args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn gates_lists_the_library() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&waltz(&["gates"], dir.path()));
    assert_eq!(text.lines().count(), 54);
    assert!(text.contains("CCZ^{01,0}\t4,4\t232\t0.99\n"));
    let records = json(&waltz(&["gates", "--format", "json"], dir.path()));
    assert_eq!(records.as_array().unwrap().len(), 53);
}
