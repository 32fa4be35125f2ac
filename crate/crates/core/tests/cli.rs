use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothness-lab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify", "--format", "xml"])), 2);
    assert_eq!(code(&run(&["verify", "--alpha", "3"])), 2);
    assert_eq!(code(&run(&["verify", "--p", "0.5"])), 2);
    assert_eq!(code(&run(&["verify", "--quad-nodes", "4"])), 2);
    assert_eq!(code(&run(&["sweep", "--deltas", "0.1,abc"])), 2);
    assert_eq!(code(&run(&["verify", "--config", "/no/such/file"])), 2);
    let err = run(&["verify", "--alpha", "3"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("alpha"));
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn malformed_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "p = 2\nthis is not a pair\n").unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn tables() {
    let out = run(&["table", "--op", "psi", "--max-degree", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("function,parameter,value"));
    assert_eq!(lines.count(), 4 * 39);

    let out = run(&["table", "--op", "bestapprox", "--degrees", "2,4"]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 16);

    let out = run(&["table", "--op", "modulus", "--deltas", "0.5", "--quad-nodes", "32"]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // the constant has zero modulus
    assert!(rows[0]["value"].as_f64().unwrap() < 1e-13);
}

#[test]
fn verify_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = run(&["verify", "--seed", "7", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let doc: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["seed"], 7);
    assert!(doc["checks"].as_array().unwrap().len() >= 20);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small sweep\ndeltas = 0.2, 0.4\ndegrees = 2, 4\nkdeg = 8\nquad_n = 32\nnorm_nodes = 64\n").unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(&["sweep", "--config", cfg.to_str().unwrap(), "--seed", "3", "--format", "csv", "--out", csv.to_str().unwrap()]);
    assert!(matches!(code(&out), 0 | 1));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("check_id,case,observed,tolerance,status\n"));
    assert!(text.contains("theorem1.r2,"));
    assert!(text.contains("series[3]"));
}

#[test]
fn failing_checks_exit_1() {
    // the convergence gate cannot pass with 8 nodes
    let out = run(&["verify", "--quad-nodes", "8", "--format", "csv"]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("quadrature.convergence_gate,") && l.ends_with(",fail")));
}
