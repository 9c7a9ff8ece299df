mod common;

use std::process::{Command, Output};

use serde_json::Value;

fn hypercalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercalc")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = hypercalc(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn fixture(name: &str) -> String {
    common::fixtures_dir().join(name).display().to_string()
}

#[test]
fn fixture_exit_codes() {
    for case in common::exit_cases() {
        let out = Command::new(env!("CARGO_BIN_EXE_hypercalc")).args(&case.args).output().unwrap();
        assert_eq!(out.status.code(), Some(case.exit), "{:?}\n{}", case.args, String::from_utf8_lossy(&out.stderr));
        if let Some(needle) = &case.stdout_contains {
            assert!(String::from_utf8_lossy(&out.stdout).contains(needle.as_str()), "{:?}", case.args);
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    let args = ["check", "local-cr", "--expr", "q^3*(0,1,0,2) + conj(q)", "--random", "40", "--seed", "11"];
    let (a, b) = (hypercalc(&args), hypercalc(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    let other = hypercalc(&["check", "local-cr", "--expr", "q^3*(0,1,0,2) + conj(q)", "--random", "40", "--seed", "12"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn report_records_configuration() {
    let v = json(&["check", "local-cr", "--expr", "q^2", "--random", "5", "--seed", "99"]);
    assert_eq!(v["config"]["seed"], 99);
    assert_eq!(v["config"]["expr"], "q^2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["summary"]["evaluated"], 5);
    assert_eq!(v["summary"]["pass"], true);
    for row in v["rows"].as_array().unwrap() {
        let p: Vec<f64> = serde_json::from_value(row["point"].clone()).unwrap();
        let r = common::norm(&p);
        assert!((0.5..=2.0).contains(&r));
    }
}

#[test]
fn csv_has_header_rows_and_summary() {
    let out = hypercalc(&["check", "local-cr", "--expr", "q^2", "--random", "7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,condition,p0,p1,p2,p3,r0,r1,r2,r3,residual_norm,h");
    let data: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), 7);
    for line in data {
        assert_eq!(line.split(',').count(), 12);
    }
    assert!(lines.iter().any(|l| l.starts_with("# max_residual=") && l.contains("pass=true")));
}

#[test]
fn axis_points_are_skipped_not_fatal() {
    let v = json(&["check", "local-cr", "--expr", "q^2", "--points", &fixture("points_with_axis.csv")]);
    assert_eq!(v["summary"]["skipped"], 2);
    let skipped: Vec<u64> = v["issues"].as_array().unwrap().iter().map(|i| i["index"].as_u64().unwrap()).collect();
    assert_eq!(skipped, vec![1, 3]);
}

#[test]
fn conjugate_fails_local_cr_with_norm_two() {
    let out = hypercalc(&["check", "local-cr", "--expr", "conj(q)", "--random", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["summary"]["max_residual"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn symbolic_rows_carry_polynomials() {
    let v = json(&["check", "naive", "--expr", "q^2"]);
    assert_eq!(v["summary"]["pass"], false);
    let row = &v["rows"][0];
    assert!((row["residual_norm"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    let d = json(&["check", "directional", "--expr", "q^2"]);
    let labels: Vec<&str> = d["rows"].as_array().unwrap().iter().map(|r| r["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["i", "j", "k"]);
}

#[test]
fn parse_errors_point_at_the_offending_text() {
    let out = hypercalc(&["check", "naive", "--expr", "q + $"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("q + $"), "{err}");
    assert!(err.contains("\n  q + $\n      ^"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn solve_global_reports_solution_spaces() {
    let plain = json(&["solve-global", "--space", "plain", "--orders", "1,2", "--format", "json"]);
    assert_eq!(plain["rank"], 16);
    assert_eq!(plain["unique"], true);
    assert_eq!(plain["particular"], serde_json::json!([{ "slot": "alpha[1|1]", "value": 1.0 }]));

    let barred = json(&["solve-global", "--space", "barred", "--orders", "1,2"]);
    assert_eq!(barred["unknowns"], 64);
    assert_eq!(barred["rank"], 16);
    assert_eq!(barred["dimension"], 48);

    let cubic = json(&["solve-global", "--space", "barred", "--orders", "3,1,2,2"]);
    assert_eq!(cubic["orders"], serde_json::json!([1, 2, 3]));
    assert_eq!(cubic["rank"], 40);
    assert_eq!(cubic["dimension"], 24);
    assert_eq!(cubic["nullspace_basis"].as_array().unwrap().len(), 24);

    let text = hypercalc(&["solve-global", "--space", "barred", "--orders", "1,2", "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8(text.stdout).unwrap().contains("rank"));
}

#[test]
fn multiplication_tables() {
    let q = json(&["tables", "qmul", "--format", "json"]);
    assert_eq!(q["labels"].as_array().unwrap().len(), 4);
    let o = json(&["tables", "omul", "--format", "json"]);
    assert_eq!(o["labels"].as_array().unwrap().len(), 8);
    let text = String::from_utf8(hypercalc(&["tables", "qmul"]).stdout).unwrap();
    assert!(text.contains('k'));
}
