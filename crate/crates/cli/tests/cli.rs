use std::fs;
use std::process::Command;

fn dascmop() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dascmop"));
    cmd.env("RUST_LOG", "warn");
    cmd
}

#[test]
fn evaluate_prints_objectives_constraints_and_violation() {
    let x = vec!["0.5"; 30].join(",");
    let out = dascmop()
        .args(["evaluate", "--problem", "das-cmop1", "--eta", "0.5", "--zeta", "0.5", "--gamma", "0.5", "--x", &x])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("objectives: "));
    assert_eq!(lines[1].split_whitespace().count(), 1 + 12);
    assert!(lines[2].starts_with("violation: "));
}

#[test]
fn evaluate_rejects_wrong_length() {
    let out = dascmop().args(["evaluate", "--problem", "1", "--x", "0.5,0.5"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn ref_front_run_stats_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let front = dir.path().join("front.txt");
    let status = dascmop()
        .args(["ref-front", "--problem", "das-cmop2", "--zeta", "0.5", "--resolution", "200", "--out"])
        .arg(&front)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&front).unwrap();
    assert!(text.starts_with("# das-cmop2 eta=0 zeta=0.5 gamma=0 resolution=200"));

    let out = dir.path().join("out");
    let status = dascmop()
        .env("DASCMOP_CACHE", dir.path().join("cache"))
        .args(["run", "--problems", "2", "--triplets", "builtin16", "--runs", "2", "--budget-override", "400"])
        .args(["--algos", "moead-cdp,nsga2-cdp", "--resolution", "100", "--workers", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    // 16 cells minus the eta = 1 cell, two algorithms, two runs
    let log = fs::read_to_string(out.join("records.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 15 * 2 * 2);
    assert!(fs::read_dir(dir.path().join("cache")).unwrap().count() >= 15);

    let stats = dascmop().args(["stats", "--format", "csv", "--in"]).arg(&out).output().unwrap();
    assert!(stats.status.success());
    let csv = String::from_utf8(stats.stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 30);
    assert!(out.join("stats.csv").exists() && out.join("records.csv").exists());

    let table = dascmop().args(["table", "--in"]).arg(&out).output().unwrap();
    assert!(table.status.success());
    let md = String::from_utf8(table.stdout).unwrap();
    assert_eq!(md.lines().count(), 2 + 15);
    assert!(md.contains("das-cmop2 NSGA-II-CDP"));
}

#[test]
fn stats_on_missing_dir_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dascmop().args(["stats", "--in"]).arg(dir.path().join("nope")).output().unwrap();
    assert!(!out.status.success());
}
