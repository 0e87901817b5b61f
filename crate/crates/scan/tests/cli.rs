mod common;

use common::{run, scratch};
use greenberg_scan::{read_records, summarize, Status};

#[test]
fn jsonl_is_deterministic_and_resumable() {
    common::determinism_and_resume(2000, "jsonl", 60, "jsonl").unwrap();
}

#[test]
fn csv_is_deterministic_and_resumable() {
    common::determinism_and_resume(2000, "csv", 45, "csv").unwrap();
}

#[test]
fn summarize_replays_the_scan() {
    let dir = scratch("replay");
    let path = dir.join("out.jsonl");
    let out = run(&["scan", "--bound", "3000", "--jobs", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let live = String::from_utf8(out.stdout).unwrap();

    let replay = summarize(std::fs::File::open(&path).unwrap(), Some(3000)).unwrap();
    assert!(!replay.partial);
    assert_eq!(replay.eligible, greenberg_scan::enumerate_fields(3, 3000).unwrap().len() as u64);
    assert_eq!(replay.level1_mismatches, 0);

    let cli = run(&["summarize", "--in", path.to_str().unwrap(), "--bound", "3000"]);
    assert!(cli.status.success());
    assert_eq!(String::from_utf8(cli.stdout).unwrap(), live);
    assert_eq!(replay.to_string().trim_end(), live.trim_end());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn records_have_the_documented_shape() {
    let out = run(&["scan", "--bound", "200"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let keys: Vec<&str> = first.as_object().unwrap().keys().map(String::as_str).collect();
    for key in ["m", "ell", "status", "h", "unit_norm", "h_ell", "ord_l", "v_eps", "v_pi", "min_v", "precision_used"] {
        assert!(keys.contains(&key), "missing {key}");
    }
    assert!(!keys.contains(&"wall_ms"));
    assert_eq!(first["m"], 7);

    let out = run(&["scan", "--bound", "200", "--format", "csv"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("m,ell,status,h,unit_norm,h_ell,ord_l,"));
    let loaded = read_records(csv.as_bytes()).unwrap();
    let from_json = read_records(text.as_bytes()).unwrap();
    assert_eq!(loaded.records, from_json.records);
}

#[test]
fn exit_codes() {
    let missing = run(&["summarize", "--in", "/nonexistent/records.jsonl"]);
    assert_eq!(missing.status.code(), Some(1));

    let bad = run(&["scan", "--bound", "100", "--ell", "4"]);
    assert_eq!(bad.status.code(), Some(1));

    let starved = run(&["scan", "--bound", "500", "--precision", "4", "--precision-cap", "4"]);
    assert_eq!(starved.status.code(), Some(2));
    let records = read_records(starved.stdout.as_slice()).unwrap().records;
    assert!(records.iter().any(|r| r.status == Status::Unresolved));
    assert!(records.iter().any(|r| r.status == Status::Ok));

    let ok = run(&["check", "--m", "7", "--ell", "3"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn lambda_subcommands_print_json() {
    let out = run(&["lambda", "omega", "--n", "1", "--ell", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("T^3 + 3*T^2 + 3*T"));

    let out = run(&["lambda", "invariants", "--ell", "3", "--part", "T - 3", "--finite-exps", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lambda"], 1);
    assert_eq!(v["mu"], 0);

    let out = run(&["lambda", "capitulation", "--ell", "3", "--part", "T - 3", "--finite-exps", "1", "--n", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["lambda", "herbrand", "--ell", "3", "--part", "T^2 + 3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["lambda", "herbrand", "--ell", "3", "--part", "T^2 + 1"]);
    assert_eq!(out.status.code(), Some(1));
}
