use std::process::{Command, Output};

use serde_json::Value;

fn measlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_measlat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON record per line"))
        .collect()
}

#[test]
fn typewriter_default_counts_one_seventh_in_every_row() {
    let out = measlat(&["demo-typewriter", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let measures: Vec<&str> = recs.iter().take(4).map(|r| r["measure"].as_str().unwrap()).collect();
    assert_eq!(measures, ["1", "1/2", "1/2", "1/3"]);
    let count = recs.iter().find(|r| r.get("t").is_some()).unwrap();
    assert_eq!(count["t"], "1/7");
    assert_eq!(count["count"], 50);
    assert_eq!(recs.len(), 1275 + 2);
}

#[test]
fn single_row_is_the_unit_interval() {
    let recs = records(&measlat(&["demo-typewriter", "--rows", "1", "--output", "json"]));
    let terms: Vec<&Value> = recs.iter().filter(|r| r.get("k").is_some()).collect();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["set"], serde_json::json!([["0", "1"]]));
}

#[test]
fn stretched_terms_repeat_two_to_the_m() {
    let out = measlat(&["demo-typewriter", "--stretched", "--rows", "6", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    for r in records(&out).iter().filter(|r| r.get("m").is_some()) {
        assert_eq!(r["repeats"].as_u64().unwrap(), 1 << r["m"].as_u64().unwrap());
    }
}

#[test]
fn bisection_ends_at_one_over_1024() {
    let out = measlat(&["demo-bisection", "--steps", "10", "--seed", "9", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    for ring in ["B", "Z/6Z"] {
        let last = recs.iter().rfind(|r| r["ring"] == ring).unwrap();
        assert_eq!(last["step"], 10);
        assert_eq!(last["distance_to_one"], "1/1024");
    }
    let zero = records(&measlat(&["demo-bisection", "--steps", "0", "--output", "json"]));
    assert_eq!(zero[0]["distance_to_one"], "1");
}

#[test]
fn completion_reports_empty_typewriter_limit() {
    let out = measlat(&[
        "demo-completion",
        "--scenario",
        "typewriter",
        "--order",
        "join",
        "--horizon",
        "16",
        "--output",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["finalLimit"], serde_json::json!([]));
    assert_eq!(recs[0]["violations"], 0);
    let approx = &recs[1]["approx"]["approx"];
    assert_eq!(approx["bound"], "1/256");
}

#[test]
fn corrupted_run_names_the_violated_inequality() {
    let out = measlat(&["demo-completion", "--corrupt", "--horizon", "12", "--scenario", "increasing-sets"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("violated"), "{err}");
    assert!(String::from_utf8(out.stdout).unwrap().contains("VIOLATED"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["demo-completion", "--epsilon", "0"][..],
        &["demo-completion", "--epsilon", "-1/2"],
        &["check-properties", "--horizon", "500"],
        &["check-properties", "--samples", "0"],
        &["check-properties", "--suite", "no-such-suite"],
        &["demo-typewriter", "--rows", "0"],
        &["demo-completion", "--horizon", "4"],
    ] {
        assert_eq!(measlat(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn dv_witness_suite_prints_the_witness() {
    let out = measlat(&["check-properties", "--suite", "dv-witness"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x={0} y={1} z={10}: 10 > 9"), "{text}");
}

#[test]
fn json_suite_records_carry_the_config() {
    let out = measlat(&["check-properties", "--suite", "typewriter", "--seed", "5", "--output", "json"]);
    let recs = records(&out);
    assert_eq!(recs[0]["config"]["seed"], 5);
    assert_eq!(recs[1]["suite"], "typewriter");
    assert_eq!(recs.last().unwrap()["passed"], true);
}
