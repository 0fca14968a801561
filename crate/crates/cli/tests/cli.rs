use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yamabe-cert")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("yamabe-cert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn certify_preset_passes() {
    let o = run(&["certify", "--n", "35"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["n"], 35);
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["elapsed_ms"], 0);
}

#[test]
fn table_csv_has_28_passing_rows() {
    let o = run(&["--format", "csv", "table", "--n-min", "35", "--n-max", "62"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,d,discrim_sign,i1_sign,iprime1_zero,i2_sign,j1_sign,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 28);
    for (i, row) in rows.iter().enumerate() {
        assert!(row.starts_with(&format!("{},6,", 35 + i)), "{row}");
        assert!(row.ends_with(",true"), "{row}");
    }
}

#[test]
fn output_is_byte_stable() {
    let args = ["table", "--n-min", "40", "--n-max", "44"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let args = ["search", "--d", "6", "--n", "35", "--budget", "400", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn degree_constraint_is_a_usage_error() {
    let o = run(&["certify", "--n", "30"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn floating_or_positive_tc_refused() {
    for tc in ["-0.1", "1/10", "abc"] {
        let o = run(&["certify", "--n", "35", "--tc", tc]);
        assert_eq!(code(&o), 2, "tc = {tc}");
    }
}

#[test]
fn interval_tc() {
    let o = run(&["certify", "--n", "35", "--tc", "-1/1000:0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["mode"], "interval");
    assert_eq!(v["verdicts"]["iprime1"], "structural");
    // far beyond c-bar the discriminant fails
    assert_eq!(code(&run(&["certify", "--n", "35", "--tc", "-10:0"])), 1);
}

#[test]
fn tail_from_file_matches_preset() {
    let path = scratch("tail.txt");
    std::fs::write(&path, "# preset tail\n-10, 1/10000\n-1/1000 0.184\n-2.65e-2 7.37e-4\n").unwrap();
    let from_file = run(&["certify", "--n", "48", "--tail", path.to_str().unwrap()]);
    let preset = run(&["certify", "--n", "48"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, preset.stdout);
    assert_eq!(code(&run(&["certify", "--n", "48", "--tail", "/nonexistent/tail"])), 2);
}

#[test]
fn chenwu_preset() {
    let o = run(&["certify", "--n", "62", "--tail", "chenwu-d1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["d"], 1);
}

#[test]
fn output_file_and_csv_restrictions() {
    let path = scratch("cert.json");
    let o = run(&["--output", path.to_str().unwrap(), "certify", "--n", "36"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n"], 36);
    assert_eq!(code(&run(&["--format", "csv", "bubble-check", "--n", "35"])), 2);
}

#[test]
fn bubble_check_passes() {
    let o = run(&["bubble-check", "--n", "35"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&o);
    assert_eq!(v["checks"].as_array().unwrap().len(), 9);
}

#[test]
fn search_reports_certified_candidates() {
    let o = run(&["search", "--d", "6", "--n", "35", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["candidates"].as_array().unwrap().iter().any(|c| !c["certified"].is_null()));
}
