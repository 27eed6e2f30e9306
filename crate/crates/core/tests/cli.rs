use std::process::{Command, Output};

use serde_json::Value;

fn hus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hus"))
        .args(args)
        .env("HUS_HILL_THREADS", "2")
        .output()
        .expect("run hus")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn analyze_reports_composite() {
    let out = hus(&[
        "analyze",
        "--h",
        "1",
        "--cycle",
        "0,0.5,-0.5",
        "--family",
        "hill",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!((doc["report"]["composite"].as_f64().unwrap() - 224.0).abs() < 1e-9);
    assert_eq!(doc["report"]["selected_sums"], "S2(λ)S1(-λ)");
}

#[test]
fn exit_codes() {
    let degenerate = hus(&["analyze", "--h", "0.5", "--cycle=-1/h", "--family", "first"]);
    assert_eq!(degenerate.status.code(), Some(4));
    let unit = hus(&["analyze", "--h", "1", "--cycle", "0,sqrt(2),-sqrt(2)"]);
    assert_eq!(unit.status.code(), Some(3));
    assert_eq!(json(&unit)["report"]["verdict"], "NotStable_UnitModulus");
    let bad = hus(&["analyze", "--h", "1", "--cycle", "0,q"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cycle[1]"));
    let track_unit = hus(&["track", "--h", "1", "--cycle", "0,sqrt(2),-sqrt(2)"]);
    assert_eq!(track_unit.status.code(), Some(3));
    let oracle_unit = hus(&[
        "oracle",
        "--h",
        "1",
        "--cycle",
        "0,sqrt(2),-sqrt(2)",
        "--family",
        "hill",
    ]);
    assert_eq!(oracle_unit.status.code(), Some(3));
    let short = hus(&[
        "track", "--h", "1", "--cycle", "0.05", "--family", "first", "--window", "10",
    ]);
    assert_eq!(short.status.code(), Some(5));
}

#[test]
fn track_csv_columns() {
    let out = hus(&[
        "track", "--h", "1", "--cycle", "0.5", "--family", "hill", "--out", "csv", "--window", "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,t,psi,exact,deviation"));
    assert_eq!(lines.count(), 21);
}

#[test]
fn track_ratio_is_sound() {
    let doc = json(&hus(&[
        "track",
        "--h",
        "1",
        "--cycle",
        "0.5",
        "--family",
        "hill",
        "--epsilon",
        "1e-3",
    ]));
    assert!(doc["ratio"].as_f64().unwrap() <= 1.0 + 1e-6);
    let zero = json(&hus(&[
        "track",
        "--h",
        "1",
        "--cycle",
        "0.5",
        "--epsilon",
        "0",
    ]));
    assert_eq!(zero["sup_deviation"].as_f64(), Some(0.0));
}

#[test]
fn config_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    std::fs::write(
        &first,
        r#"{"h": 0.1, "cycle": ["pi", "2*pi"], "family": "PQR", "seed": 42, "epsilon": 1e-4}"#,
    )
    .unwrap();
    let a = hus(&["analyze", "--config", first.to_str().unwrap()]);
    let doc = json(&a);
    let second = dir.path().join("b.json");
    std::fs::write(&second, doc["config"].to_string()).unwrap();
    let b = hus(&["analyze", "--config", second.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);

    let ta = hus(&["track", "--config", first.to_str().unwrap()]);
    let tb = hus(&["track", "--config", second.to_str().unwrap()]);
    assert_eq!(ta.stdout, tb.stdout);
}

#[test]
fn sweep_rows_are_ordered() {
    let out = hus(&[
        "sweep", "--h", "1", "--cycle", "0,A,-A", "--sweep", "A:0:3:31",
    ]);
    let doc = json(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 31);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"].as_u64(), Some(i as u64));
    }
    let csv = hus(&[
        "sweep", "--h", "1", "--cycle", "0,A,-A", "--sweep", "A:0:3:31", "--out", "csv",
    ]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 32);
}

#[test]
fn oracle_saturates_geometric_series() {
    let doc = json(&hus(&[
        "oracle",
        "--h",
        "1",
        "--cycle",
        "0.5",
        "--family",
        "first",
        "--horizon",
        "24",
        "--seed",
        "3",
    ]));
    assert!(doc["best_ratio"].as_f64().unwrap() >= 0.95);
    assert!(doc["best_ratio"].as_f64().unwrap() <= 1.0 + 1e-6);
    let small = json(&hus(&[
        "oracle",
        "--h",
        "1",
        "--cycle",
        "0.5",
        "--family",
        "first",
        "--horizon",
        "8",
    ]));
    assert_eq!(small["exhaustive"], true);
}
