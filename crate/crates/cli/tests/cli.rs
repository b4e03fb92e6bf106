use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperpart")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn betti_on_three_lines() {
    let out = run(&["--fixture", "three-lines", "betti", "--format", "text"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("1 3 2\n"));
    assert_eq!(json(&["--fixture", "three-lines", "betti"])["betti"], serde_json::json!([1, 3, 2]));
}

#[test]
fn strata_match_the_three_lines_picture() {
    let v = json(&["--fixture", "three-lines", "strata"]);
    assert_eq!(v["level_sizes"], serde_json::json!([1, 3, 2]));
    let support = |label: &str| {
        v["strata"].as_array().unwrap().iter().find(|s| s["label"] == label).unwrap()["flat_support"].clone()
    };
    assert_eq!(support("C_0"), serde_json::json!([]));
    assert_eq!(support("C_1"), serde_json::json!([1]));
    assert_eq!(support("C_2"), serde_json::json!([2]));
    assert_eq!(support("C_3"), serde_json::json!([3]));
    assert_eq!(support("C_4"), serde_json::json!([1, 3]));
    assert_eq!(support("C_5"), serde_json::json!([1, 2]));
}

#[test]
fn classify_point_in_line() {
    for (x, v, label) in [("1", "0", "C_1"), ("1", "1", "C_0"), ("-1", "0", "C_0")] {
        let a = json(&["--fixture", "point-in-line", "classify", "--x", x, "--v", v]);
        assert_eq!(a["label"], label, "x = {x}, v = {v}");
    }
    let out = run(&["--fixture", "point-in-line", "classify", "--x", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("H1"));
}

#[test]
fn classify_reads_point_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"x": ["8", "3"], "v": ["1", "-1"]}"#);
    let a = json(&["--fixture", "three-lines", "classify", "--point", &p]);
    assert_eq!(a["label"], "C_2");
    assert_eq!(a["witness"]["flat_support"], serde_json::json!([2]));
}

#[test]
fn corrupted_flag_is_rejected_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let flag = write(
        dir.path(),
        "flag.json",
        r#"{"forms": [{"linear": ["1", "0"], "constant": "4"}, {"linear": ["1", "-1"], "constant": "3"}]}"#,
    );
    let out = run(&["--fixture", "three-lines", "--flag", &flag, "flag", "check"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["violation"]["kind"], "not_generic");
    assert_eq!(v["violation"]["flat"], serde_json::json!([1]));
}

#[test]
fn generated_flag_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let arr = run(&["fixture", "three-lines", "--part", "arrangement"]);
    let arr = write(dir.path(), "arr.json", std::str::from_utf8(&arr.stdout).unwrap());
    let flag = run(&["-i", &arr, "flag", "gen", "--flag-seed", "9"]);
    assert!(flag.status.success());
    let flag = write(dir.path(), "flag.json", std::str::from_utf8(&flag.stdout).unwrap());
    assert_eq!(json(&["-i", &arr, "--flag", &flag, "flag", "check"])["ok"], true);
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["--fixture", "three-lines", "verify", "partition", "--samples", "200", "--seed", "3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["violations"], serde_json::json!([]));
    assert!(run(&["--fixture", "three-lines", "verify", "star", "--samples", "10"]).status.success());
    assert_eq!(json(&["--fixture", "three-lines", "verify", "homology"])["passed"], true);
}

#[test]
fn homology_matrix_and_os_map() {
    let m = json(&["--fixture", "three-lines", "homology", "matrix", "--level", "1"]);
    assert_eq!(m["entries"], serde_json::json!([[-1, -1, -1], [0, -1, 0], [0, 0, -1]]));
    assert_eq!(m["labels"], serde_json::json!(["C_1", "C_2", "C_3"]));
    let zero = json(&["--fixture", "three-lines", "os-map", "--indices", "2,3"]);
    assert_eq!(zero["class"], serde_json::json!([]));
    assert_eq!(zero["dual_check_holds"], true);
    let one = json(&["--fixture", "three-lines", "os-map", "--indices", "1"]);
    let names: Vec<&str> = one["class"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["C_1"]);
    assert_eq!(run(&["--fixture", "three-lines", "os-map", "--indices", "0"]).status.code(), Some(2));
}

#[test]
fn render_draws_the_fixture() {
    let out = run(&["--fixture", "three-lines", "render"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    for needle in ["H1", "H2", "H3", "F^1", "F^0", "C_0", "C_5"] {
        assert!(svg.contains(needle), "missing {needle}");
    }
    assert_eq!(run(&["--fixture", "point-in-line", "render"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 2,\n \"hyperplanes\": [{\"linear\": [\"1\"], \"constant\": \"x\"}]}");
    let out = run(&["-i", &bad, "betti"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(run(&["--fixture", "nowhere", "betti"]).status.code(), Some(2));
    assert_eq!(run(&["betti"]).status.code(), Some(2));
}

#[test]
fn chambers_are_json_lines() {
    let out = run(&["--fixture", "three-lines", "chambers"]);
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l["signs"].as_str().unwrap().len() == 3));
}
