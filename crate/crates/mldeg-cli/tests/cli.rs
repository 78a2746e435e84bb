//! End-to-end checks of the binary: subcommand output, the exit-code
//! contract, and the JSON/CSV emitters.

use std::path::Path;
use std::process::{Command, Output};

fn mldeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mldeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn count_emits_single_json_record() {
    let out = mldeg(&["count", "--n", "3", "--m", "2", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 1);
    let record: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(record["count"], 3);
    assert_eq!(record["status"], "counted");
    assert_eq!(record["encoding"], "reduced");
}

#[test]
fn count_is_deterministic_modulo_timing() {
    let args = ["count", "--n", "3", "--m", "2", "--seed", "7", "--encoding", "eliminated"];
    let a = stdout(&mldeg(&args));
    let b = stdout(&mldeg(&args));
    let strip = |s: &str| -> String {
        let mut v: serde_json::Value = serde_json::from_str(s.trim()).unwrap();
        v["elapsed_ms"] = 0.into();
        v.to_string()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn count_budget_exhaustion_is_nonzero_exit() {
    let out = mldeg(&[
        "count", "--n", "4", "--m", "3", "--seed", "1", "--budget-pairs", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["status"], "budget-exhausted");
    assert_eq!(record["count"], serde_json::Value::Null);
}

#[test]
fn formula_table() {
    let out = mldeg(&["formula", "--m", "3", "--n-min", "3", "--n-max", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for expected in ["7", "19", "37"] {
        assert!(text.contains(expected), "missing {expected} in:\n{text}");
    }
}

#[test]
fn verify_small_sweep_exit_zero_and_round_trip() {
    let dir = std::env::temp_dir().join(format!("mldeg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("run.jsonl");
    let csv = dir.join("run.csv");
    let out = mldeg(&[
        "verify",
        "--cell", "3,2",
        "--seeds", "1,2",
        "--primes", "2147483647",
        "--encodings", "eliminated",
        "--out-json", json.to_str().unwrap(),
        "--out-csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("cell n=3 m=2 expected=3 verdict=MATCH"));
    assert!(text.contains("overall: MATCH"));

    // The two report files carry identical data.
    let from_json = mldeg::harness::read_json_records(
        std::fs::File::open(&json).unwrap(),
    )
    .unwrap();
    let from_csv = mldeg::harness::read_csv_records(
        std::fs::File::open(&csv).unwrap(),
    )
    .unwrap();
    assert_eq!(from_json, from_csv);
    assert_eq!(from_json.len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_empty_cells_is_usage_error() {
    let out = mldeg(&["verify"]);
    assert!(!out.status.success());
}

#[test]
fn verify_inconclusive_exit_two() {
    let out = mldeg(&[
        "verify",
        "--cell", "4,3",
        "--seeds", "1",
        "--primes", "2147483647",
        "--encodings", "reduced",
        "--budget-pairs", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("verdict=INCONCLUSIVE"));
}

#[test]
fn delta_oracle_matches() {
    let out = mldeg(&["delta-oracle", "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["count"], 4);
    assert_eq!(record["expected"], 4);
    assert_eq!(record["matches"], true);
}

#[test]
fn export_system_round_trips() {
    let out = mldeg(&[
        "export-system", "--n", "3", "--m", "2", "--seed", "1", "--encoding", "reduced",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let system = mldeg::SymbolicSystem::from_text(&text).unwrap();
    assert_eq!(system.equations().len(), 11);
    assert_eq!(system.variables().len(), 8);

    // The slice system exports too.
    let out = mldeg(&["export-system", "--n", "3", "--encoding", "corank-slice"]);
    assert!(out.status.success());
    let slice = mldeg::SymbolicSystem::from_text(&stdout(&out)).unwrap();
    assert_eq!(slice.variables().len(), 6);
}

#[test]
fn rejects_composite_prime() {
    let out = mldeg(&["count", "--n", "3", "--m", "2", "--prime", "2147483646"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn bin_path_exists() {
    assert!(Path::new(env!("CARGO_BIN_EXE_mldeg")).exists());
}
