use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn morsematch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morsematch")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("result.json");
    let out = morsematch(&["solve", "--instance", "projective", "-o", path(&result)]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap();
    assert_eq!(doc["status"]["name"], "optimal");
    assert_eq!(doc["c"], 3);
    assert_eq!(doc["matching_size"], 14);
    assert_eq!(doc["schema_version"], 1);

    let out = morsematch(&["check", "--instance", "projective", "-m", path(&result), "--function"]);
    assert_eq!(out.status.code(), Some(0));
    let check = json(&out);
    assert_eq!(check["valid"], true);
    assert!(check["function"].is_object() || check["function"].is_array());
}

#[test]
fn check_reports_a_cycle_witness() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("circle.txt");
    fs::write(&complex, "1 2\n2 3\n1 3\n").unwrap();
    let matching = dir.path().join("m.json");
    fs::write(
        &matching,
        r#"[{"upper":[1,2],"lower":[1]},{"upper":[2,3],"lower":[2]},{"upper":[1,3],"lower":[3]}]"#,
    )
    .unwrap();
    let out = morsematch(&["check", path(&complex), "-m", path(&matching)]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["valid"], false);
    assert_eq!(doc["witness"]["faces"].as_array().unwrap().len(), 6);

    fs::write(&matching, r#"[{"upper":[1,2],"lower":[3]}]"#).unwrap();
    let out = morsematch(&["check", path(&complex), "-m", path(&matching)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not cover"));
}

#[test]
fn limits_give_exit_code_two() {
    let out = morsematch(&["solve", "--instance", "dunce", "--no-free-face-cuts", "--node-limit", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"]["name"], "node_limit");
}

#[test]
fn other_commands() {
    let out = morsematch(&["betti", "--instance", "projective", "--fields", "q,gf2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("euler"));

    let out = morsematch(&["info", "--instance", "dunce"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["m"], 99);

    let out = morsematch(&["heuristic", "--instance", "sphere3", "--root-lp"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["c"], 2);
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(morsematch(&["solve", "--instance", "torus"]).status.code(), Some(1));
    assert_eq!(morsematch(&["solve", "/no/such/file"]).status.code(), Some(1));
    assert_eq!(morsematch(&["solve", "--instance", "dunce", "--fields", "gf4"]).status.code(), Some(1));
    assert_eq!(morsematch(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(morsematch(&["--help"]).status.code(), Some(0));
}

#[test]
fn dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("root.lp");
    let graphs = dir.path().join("graphs.txt");
    let out = morsematch(&["solve", "--instance", "sphere2", "--dump-lp", path(&lp), "--dump-transformed", path(&graphs)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(&lp).unwrap().contains("Maximize"));
    assert!(!fs::read_to_string(&graphs).unwrap().is_empty());
}
