//! End-to-end tests of the binary: exit codes, output formats, and the
//! canonical-JSON round trip.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newform-census"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn dim_prescribed_level_1331() {
    let out = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--m",
        "1",
        "--local",
        "11:1:mT:+1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], 17);
    assert_eq!(v["dim_orbit"], 85);
    assert_eq!(v["trace_used"], 20);
    assert_eq!(v["level"], 1331);
    assert_eq!(v["main_term"]["num"], 15);
    assert_eq!(v["main_term"]["den"], 1);
}

#[test]
fn dim_prescribed_level_3125_other_class() {
    let out = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--local",
        "5:2:other:+1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 0);
    assert_eq!(v["dim"], 15);
    assert_eq!(v["dim_orbit"], 150);
}

// Canonical JSON: parsing and re-serializing reproduces the bytes.
#[test]
fn json_round_trips_canonically() {
    for args in [
        vec![
            "dim-prescribed",
            "--k",
            "4",
            "--local",
            "11:1:mT:+1",
            "--format",
            "json",
        ],
        vec!["orbit-table", "--k", "4", "--t", "11", "--format", "json"],
        vec!["trace", "--k", "4", "--t", "11", "--format", "json"],
        vec!["class-number", "--t", "23", "--format", "json"],
        vec![
            "dim-newspace",
            "--k",
            "4",
            "--n",
            "1331",
            "--format",
            "json",
        ],
        vec!["local-oracle", "--p", "5", "--r", "1", "--format", "json"],
        vec!["consistency", "--quick", "--format", "json"],
        vec![
            "depth-zero",
            "--k",
            "4",
            "--local",
            "13:1:other:+1",
            "--s-local",
            "3:+1",
            "--smin-trace",
            "0",
            "--format",
            "json",
        ],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let text = stdout(&out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let re = format!("{}\n", serde_json::to_string(&v).unwrap());
        assert_eq!(text, re, "round trip differs for {args:?}");
    }
}

#[test]
fn validation_errors_exit_1() {
    // gcd(M, T) != 1.
    let out = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--m",
        "6",
        "--local",
        "3:1:mT:+1",
        "--local",
        "5:1:mT:+1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("coprime"));

    // Non-prime local.
    let out = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--m",
        "6",
        "--local",
        "15:1:mT:+1",
    ]);
    assert_eq!(code(&out), 1);

    // Odd weight.
    let out = run(&["dim-prescribed", "--k", "5", "--local", "11:1:mT:+1"]);
    assert_eq!(code(&out), 1);

    // Unknown flag is a usage error.
    let out = run(&["dim-prescribed", "--nope"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn trace_unavailable_exits_2() {
    let out = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--m",
        "2",
        "--local",
        "3:1:qr:+1",
        "--local",
        "5:1:qr:+1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("trace"));

    // With an override the same input succeeds.
    let out = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--m",
        "2",
        "--local",
        "3:1:qr:+1",
        "--local",
        "5:1:qr:+1",
        "--trace-override",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);

    // Depth zero with nonempty S and no supplied trace.
    let out = run(&[
        "depth-zero",
        "--k",
        "4",
        "--local",
        "11:1:mT:+1",
        "--s-local",
        "5:+1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn orbit_table_epsilon_classes() {
    let out = run(&["orbit-table", "--k", "4", "--t", "11", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mut dims: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim_orbit"].as_u64().unwrap())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![65, 75, 75, 85]);
    assert_eq!(v["dim_new"], 300);
    assert_eq!(v["consistent"], true);

    let out = run(&[
        "orbit-table",
        "--k",
        "4",
        "--t",
        "5",
        "--r",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim_new"], 600);
    assert_eq!(v["sum_dim_orbit"], 600);

    // The footer identity holds at other weights (uppercase aliases too).
    let out = run(&["orbit-table", "--k", "6", "--T", "11", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["consistent"], true);
}

#[test]
fn orbit_table_csv_has_header_and_total() {
    let out = run(&["orbit-table", "--k", "4", "--t", "11", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "e_class,eps,delta,dim,orbit_mult,dim_orbit"
    );
    assert!(text.lines().any(|l| l.starts_with("TOTAL")));
}

#[test]
fn trace_and_class_number_values() {
    let out = run(&[
        "trace", "--k", "4", "--t", "11", "--r", "1", "--m", "1", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trace"], 20);
    assert_eq!(v["route"], "m1");

    let out = run(&[
        "trace", "--k", "4", "--t", "5", "--r", "2", "--m", "3", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trace"], 0);
    assert_eq!(v["route"], "prime");

    let out = run(&["class-number", "--t", "11", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class_number"], 1);
    assert_eq!(v["discriminant"], -11);

    let out = run(&["class-number", "--disc", "-23", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class_number"], 3);
}

#[test]
fn local_oracle_reports_both_unit_classes() {
    let out = run(&["local-oracle", "--p", "3", "--r", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("order 9, cyclic: false"), "{text}");
    assert!(text.contains("order 9, cyclic: true"), "{text}");

    let out = run(&["local-oracle", "--p", "5", "--r", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for class in v["classes"].as_array().unwrap() {
        assert_eq!(class["order"], 25);
        assert_eq!(class["cyclic"], true);
        assert_eq!(class["primitive_characters"], 20);
        assert_eq!(class["index_checks_pass"], true);
    }
}

#[test]
fn depth_zero_empty_s_matches_dim_prescribed() {
    let a = run(&[
        "depth-zero",
        "--k",
        "4",
        "--local",
        "11:1:mT:-1",
        "--format",
        "json",
    ]);
    let b = run(&[
        "dim-prescribed",
        "--k",
        "4",
        "--local",
        "11:1:mT:-1",
        "--format",
        "json",
    ]);
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    for key in [
        "main_term",
        "delta",
        "eps_product",
        "trace_used",
        "dim",
        "dim_orbit",
    ] {
        assert_eq!(va[key], vb[key], "{key}");
    }
}

#[test]
fn consistency_quick_passes() {
    let out = run(&["consistency", "--quick", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ok"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"fixture-replay"));
    assert!(names.contains(&"atkin-lehner-trace"));
}

#[test]
fn consistency_rejects_bad_fixture_file() {
    let dir = std::env::temp_dir().join("newform-census-test-fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_schema.json");
    std::fs::write(&path, r#"{"schema": 2, "fixtures": []}"#).unwrap();
    let out = run(&[
        "consistency",
        "--quick",
        "--fixtures",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("schema"));
}
