use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn e7sym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e7sym"))
        .args(args)
        .env_remove("E7SYM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn mul_table_json_is_k_by_k() {
    let out = e7sym(&["mul-table", "--level", "3", "--format", "json"]);
    assert!(out.status.success());
    let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.len() == 8));
    assert!(e7sym(&["mul-table", "--level", "4"]).status.code() == Some(2));
}

#[test]
fn invariant_det_and_trace() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.json", r#"[[1],[2],[0],[2],[3],["1/2"],[0],["1/2"],[4]]"#);
    assert_eq!(stdout(&e7sym(&["invariant", "det", "--input", &x])).trim(), "-17/4");
    assert_eq!(stdout(&e7sym(&["invariant", "trace", "--input", &x])).trim(), "8/1");
}

#[test]
fn dims_over_reals() {
    assert_eq!(stdout(&e7sym(&["dims", "--algebra", "R"])).trim(), "21");
}

#[test]
fn act_and_cube_commands() {
    let dir = TempDir::new().unwrap();
    let id = r#"[[1],[0],[0],[0],[1],[0],[0],[0],[1]]"#;
    let zero = r#"[[0],[0],[0],[0],[0],[0],[0],[0],[0]]"#;
    let p = write(dir.path(), "p.json", &format!(r#"{{"X": {id}, "Y": {zero}, "p": "1/2", "q": 2}}"#));
    let theta = write(dir.path(), "t.json", &format!(r#"{{"rho": 1, "A": {id}}}"#));

    let image: serde_json::Value = serde_json::from_str(&stdout(&e7sym(&["act", "--theta", &theta, "--p", &p]))).unwrap();
    assert_eq!(image["X"][0][0], "7/3");
    assert_eq!(image["Y"][0][0], "2/1");
    assert_eq!(image["p"], "-1/2");
    assert_eq!(image["q"], "2/1");

    let cube_text = stdout(&e7sym(&["cube", "assemble", "--p", &p]));
    let cube = write(dir.path(), "c.json", &cube_text);
    let entries: Vec<serde_json::Value> = serde_json::from_str(&cube_text).unwrap();
    assert!(!entries.is_empty());

    let dil = write(dir.path(), "d.json", r#"{"algebra": "R", "basis": 20}"#);
    let naive = e7sym(&["cube", "act", "--mode", "naive", "--theta", &dil, "--cube", &cube]);
    let sided = e7sym(&["cube", "act", "--mode", "sided", "--theta", &dil, "--cube", &cube]);
    assert!(naive.status.success() && sided.status.success());

    let bad = write(dir.path(), "bad.json", r#"[{"a":1,"b":2,"c":3,"coeffs":[1]}]"#);
    assert_eq!(e7sym(&["cube", "act", "--mode", "naive", "--theta", &dil, "--cube", &bad]).status.code(), Some(2));
}

#[test]
fn bracket_of_dilation_with_itself_is_zero() {
    let dir = TempDir::new().unwrap();
    let dil = write(dir.path(), "d.json", r#"{"algebra": "C", "basis": 34}"#);
    assert_eq!(stdout(&e7sym(&["bracket", "--a", &dil, "--b", &dil])).trim(), "[]");
}

#[test]
fn verify_writes_report_and_sets_exit_code() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.jsonl");
    let out = e7sym(&[
        "verify", "--algebra", "R", "--suite", "dims", "--suite", "symplectic", "--report", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = fs::read_to_string(&report)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["check_id"], "dims");
    assert_eq!(lines[2]["summary"]["fail"], 0);

    let out = e7sym(&["verify", "--algebra", "R", "--suite", "theorem", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"status\":\"fail\""));
}

#[test]
fn export_sc_csv() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("sc.csv");
    assert!(e7sym(&["export-sc", "--algebra", "R", "--out", out_path.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,k,c"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.len() == 4 && r[3].contains('/')));
}
