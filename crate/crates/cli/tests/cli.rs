use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ce-calabi")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn temp_file(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("ce-calabi-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_unknot_passes() {
    let out = run(&["verify", &fixture("unknot.leg"), "--k", "3", "--max-len", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn garbage_is_an_input_error() {
    let f = temp_file("garbage.leg", "this is not a presentation\n");
    let out = run(&["validate", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E005"));
    let out = run(&["validate", &f, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "I002-parse");
}

#[test]
fn missing_file_and_bad_window() {
    assert_eq!(run(&["validate", "/nonexistent/x.leg"]).status.code(), Some(2));
    assert_eq!(run(&["hochschild", "--fixture", "unknot", "--window", "3:1"]).status.code(), Some(2));
}

#[test]
fn broken_differential_fails_checks() {
    let f = temp_file("broken.leg", "legendrian v1\ndim 1\ngen a cz 1\ngen b cz 1\nd a = b\nd b = a\n");
    let out = run(&["validate", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    assert_eq!(run(&["verify", &f, "--k", "2", "--max-len", "1"]).status.code(), Some(1));
}

#[test]
fn cy_table_for_unknot() {
    let out = run(&["cy", &fixture("unknot.leg"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cy1"]["a_10"], "y_01");
    assert_eq!(v["cy1"]["x_01"], "a_01");
}

#[test]
fn twocopy_lists_both_complexes() {
    let out = run(&["twocopy", "--fixture", "trefoil", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["hat_plus"].as_array().unwrap().len(), 6);
    assert_eq!(v["check_minus"].as_array().unwrap().len(), 6);
    assert!(v["semifree_order"].is_array());
}

#[test]
fn hochschild_reports_masks() {
    let out = run(&["hochschild", "--fixture", "trefoil", "--window", "0:1", "--max-len", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    // the trefoil differential contains 1, so no degree is reliable
    assert_eq!(reports[0]["masked_degrees"], serde_json::json!([0, 1]));
}
