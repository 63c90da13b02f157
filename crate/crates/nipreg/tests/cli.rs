//! Exit-code and report-shape contract of the nipreg binary.

use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nipreg"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout).unwrap_or(Value::Null)
    };
    (
        report,
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn vc_example_reports_dimension_two() {
    let (report, code, _) = run(&[
        "vc",
        "--group",
        r#"{"preset":"cyclic","n":12}"#,
        "--set",
        r#"{"elements":[0,1,2,3]}"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["vc_dimension"], 2);
}

#[test]
fn malformed_input_exits_four() {
    let (_, code, err) = run(&["vc", "--group", r#"{"preset":"nosuch"}"#, "--set", "{}"]);
    assert_eq!(code, 4);
    assert!(!err.is_empty());
}

#[test]
fn exact_mode_non_coset_union_z_exits_four() {
    let (_, code, err) = run(&[
        "decompose",
        "--group",
        r#"{"preset":"cyclic","n":8}"#,
        "--set",
        r#"{"elements":[0,1]}"#,
        "--eps",
        "1/2",
        "--mode",
        "exact",
        "--subgroup",
        r#"{"elements":[0,4]}"#,
        "--z",
        r#"{"elements":[1]}"#,
    ]);
    assert_eq!(code, 4);
    assert!(err.contains("union of cosets"));
}

#[test]
fn rejected_decomposition_exits_two() {
    // an arc in Z/7 has no pure-subgroup witness at a tight epsilon
    let (report, code, _) = run(&[
        "decompose",
        "--group",
        r#"{"preset":"cyclic","n":7}"#,
        "--set",
        r#"{"elements":[0,1,2]}"#,
        "--eps",
        "1/7",
        "--mode",
        "subgroup",
        "--max-index",
        "1",
    ]);
    assert_eq!(code, 2);
    assert_eq!(report["verdict"], "reject");
}

#[test]
fn budget_exhaustion_exits_three() {
    let (_, code, err) = run(&[
        "decompose",
        "--group",
        r#"{"preset":"cyclic","n":101}"#,
        "--set",
        r#"{"mask_hex":"0x3ffffffffffff"}"#,
        "--eps",
        "2/5",
        "--mode",
        "bohr",
        "--budget",
        "3",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
}

#[test]
fn witness_round_trips_through_verify() {
    let dir = std::env::temp_dir().join("nipreg-cli-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let out_str = out.to_str().unwrap();
    let (_, code, _) = run(&[
        "decompose",
        "--group",
        r#"{"preset":"elementary_abelian","p":2,"k":4}"#,
        "--set",
        r#"{"elements":[0,1,2,3,8,9,10,11]}"#,
        "--eps",
        "1/4",
        "--mode",
        "subgroup",
        "--out",
        out_str,
    ]);
    assert_eq!(code, 0);
    let (report, code, _) = run(&["verify", "--witness", out_str]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "accept");
}

#[test]
fn batch_runs_entries_and_summarizes_in_order() {
    let dir = std::env::temp_dir().join("nipreg-cli-batch");
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(
        &spec,
        r#"{
  "entries": [
    {"name": "arc-vc", "group": {"preset": "cyclic", "n": 12},
     "set": {"generator": "arc", "length": 4}, "command": "vc"},
    {"name": "arc-stability", "group": {"preset": "cyclic", "n": 12},
     "set": {"generator": "arc", "length": 4}, "command": "stability",
     "params": {"max_k": 5}},
    {"name": "qr-vc", "group": {"preset": "cyclic", "n": 7},
     "set": {"generator": "quadratic-residues"}, "command": "vc"}
  ]
}"#,
    )
    .unwrap();
    let (report, code, _) = run(&["batch", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert_eq!(entries[0]["name"], "arc-vc");
    assert_eq!(entries[0]["report"]["vc_dimension"], 2);
    assert_eq!(entries[1]["name"], "arc-stability");
    assert_eq!(entries[1]["report"]["stability_order"], 4);
    assert_eq!(entries[2]["report"]["vc_dimension"], 2);
    assert_eq!(report["summary"]["total"], 3);
    assert_eq!(report["summary"]["errors"], 0);
}

#[test]
fn size_limit_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_nipreg"))
        .env("NIPREG_SIZE_LIMIT", "8")
        .args([
            "vc",
            "--group",
            r#"{"preset":"cyclic","n":12}"#,
            "--set",
            r#"{"elements":[0]}"#,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn text_format_renders_key_values() {
    let out = Command::new(env!("CARGO_BIN_EXE_nipreg"))
        .args([
            "vc",
            "--group",
            r#"{"preset":"cyclic","n":12}"#,
            "--set",
            r#"{"elements":[0,1,2,3]}"#,
            "--format",
            "text",
        ])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("vc_dimension: 2"));
}
