//! End-to-end runs of the `btstrat` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn btstrat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btstrat")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(x) => x.is_f64(),
        Value::Array(items) => items.iter().any(has_float),
        Value::Object(map) => map.values().any(has_float),
        _ => false,
    }
}

#[test]
fn report_json_layout() {
    let out = btstrat(&["report", "--n", "3", "--h", "0,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["body", "checks", "header"]);
    assert_eq!(v["header"]["schema"], "btstrat-report/1");
    assert_eq!(v["header"]["field"]["size"], 9);
    assert_eq!(v["body"]["components"]["orbit_count"], 2);
    assert!(!has_float(&v));
}

#[test]
fn reports_are_byte_identical() {
    for args in [&["report", "--n", "4", "--h", "1,3"][..], &["poset", "--n", "3", "--h", "1", "--format", "dot"][..]] {
        assert_eq!(stdout(&btstrat(args)), stdout(&btstrat(args)));
    }
}

#[test]
fn closed_form_discrepancy_exits_nonzero() {
    let out = btstrat(&["report", "--n", "4", "--h", "0,4"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let failed: Vec<&str> = v["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["orbit_count_closed_form"]);
}

#[test]
fn hyperspecial_poset_dot() {
    let out = btstrat(&["poset", "--n", "3", "--h", "0", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let nodes: Vec<&str> = text.lines().filter(|l| l.contains("[label=")).collect();
    let edges = text.lines().filter(|l| l.contains("->")).count();
    assert_eq!(nodes.len(), 29);
    assert_eq!(edges, 28);
    assert!(nodes.iter().all(|l| l.trim_start().starts_with("idx_") && l.contains("dim=")));
    for hint in ["pos=", "rankdir", "layout", "rank=", "width=", "height="] {
        assert!(!text.contains(hint), "{hint}");
    }
}

#[test]
fn markdown_and_out_file() {
    let path = std::env::temp_dir().join(format!("btstrat-cli-test-{}.md", std::process::id()));
    let out = btstrat(&["report", "--n", "2", "--h", "1", "--format", "md", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.contains("| I={0};t0=;t1=0:2 |"));
    assert!(text.contains("| 10 | 6 |"));
}

#[test]
fn verify_suites() {
    let out = btstrat(&["verify", "--n", "3", "--h", "0", "--suite", "bijection"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["checks"][0]["name"], "point_type_bijection");
    let out = btstrat(&["verify", "--n", "4", "--h", "0,2,4", "--suite", "coxeter"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["verify", "--n", "3", "--h", "0", "--suite", "lattices"][..],
        &["report", "--n", "3", "--h", "0,1"][..],
        &["report", "--n", "3", "--h", "0", "--q", "4"][..],
        &["report", "--n", "3", "--h", "0", "--d", "3"][..],
        &["verify", "--n", "3", "--h", "0", "--format", "dot"][..],
    ] {
        let out = btstrat(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn bundled_fixtures_reproduce() {
    let out = btstrat(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let fixtures = v["fixtures"].as_array().unwrap();
    assert_eq!(fixtures.len(), 5);
    assert!(fixtures.iter().all(|f| f["passed"] == true));
}

#[test]
fn altered_fixture_fails() {
    let path = std::env::temp_dir().join(format!("btstrat-fixture-{}.json", std::process::id()));
    let data = r#"{ "components": [ { "tag": "wrong", "n": 3, "h": [0, 2], "orbits": 3, "dimensions": [1, 2] } ], "points": [] }"#;
    std::fs::write(&path, data).unwrap();
    let out = btstrat(&["fixtures", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(1));
}
