use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn lexkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexkit")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = lexkit(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    (o.status.code().unwrap(), v)
}

#[test]
fn finset_is_adhesive() {
    let (code, v) = json(&["check", "--property", "adhesive", "--carrier", "finset", "--max-size", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "holds");
    assert!(v.get("counterexample").is_none());
}

#[test]
fn finposet_adhesive_fails_and_replays() {
    let args = ["check", "--property", "adhesive", "--carrier", "finposet", "--max-size", "4", "--seed", "1"];
    let (code, v) = json(&args);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fails");
    assert!(v["counterexample"].is_object());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cx.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let (code, r) = json(&["check", "--property", "adhesive", "--carrier", "finposet", "--replay", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["reproduced"], true);
    assert_eq!(r["identical"], true);
    assert_eq!(r["counterexample"], v["counterexample"]);
}

#[test]
fn presheaves_are_regular() {
    let (code, v) = json(&["check", "--property", "regular", "--carrier", "presheaf:walking_arrow", "--max-size", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["carrier"], "presheaf:walking_arrow");
}

#[test]
fn postulate_pushout_along_mono() {
    let (code, v) = json(&["postulate", &data("adhesive.lex")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["cocones"][0]["report"]["status"], "holds");
}

#[test]
fn postulate_reports_failing_probe() {
    let (code, v) = json(&["postulate", &data("poset_reg.lex"), "--carrier", "finposet"]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["cocones"][0]["report"]["status"], "fails");
    let text = String::from_utf8(lexkit(&["postulate", &data("poset_reg.lex"), "--carrier", "finposet"]).stdout).unwrap();
    assert!(text.contains("P1"), "{text}");
}

#[test]
fn postulate_base_cocones() {
    let (code, v) = json(&["postulate", &data("diamond.lex")]);
    assert_eq!(code, 1);
    let status: Vec<&Value> = v["cocones"].as_array().unwrap().iter().map(|c| &c["report"]["status"]).collect();
    assert_eq!(status, ["holds", "fails"]);
    let (code, v) = json(&["postulate", &data("trivial.lex")]);
    assert_eq!(code, 0);
    assert_eq!(v["cocones"][0]["report"]["status"], "holds");
}

#[test]
fn closure_of_point_under_lext() {
    let (code, v) = json(&["complete", "--base", "discrete1", "--classes", "lext", "--budget", "2"]);
    assert_eq!(code, 0);
    assert!(v["elements"].as_array().unwrap().len() >= 3, "{v}");
}

#[test]
fn eval_colimit_of_arrow() {
    let (code, v) = json(&["eval", "colimit", "--class", "reg", "--diagram", &data("arrow.lex")]);
    assert_eq!(code, 0, "{v}");
    let text = String::from_utf8(lexkit(&["eval", "colimit", "--class", "reg", "--diagram", &data("arrow.lex")]).stdout).unwrap();
    assert!(!text.is_empty());
}

#[test]
fn famf_preserves_structure() {
    let (code, v) = json(&["famf", "--base", "walking_arrow"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(lexkit(&["check", "--property", "nonsense"]).status.code(), Some(3));
    assert_eq!(lexkit(&["postulate"]).status.code(), Some(3));
    assert_eq!(lexkit(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(lexkit(&["postulate", "/nonexistent/file.lex"]).status.code(), Some(3));
    assert_eq!(lexkit(&["--help"]).status.code(), Some(0));
}
