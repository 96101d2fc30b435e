use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nikulin")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn xd(d: usize) -> tempfile::NamedTempFile {
    let mut b = vec!["0"; d + 1];
    b[d] = "1";
    let b: Vec<String> = b.iter().map(|s| format!("\"{s}\"")).collect();
    file(&format!(r#"{{"a": ["1", "1", "0", "1"], "b": [{}]}}"#, b.join(", ")))
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn classify_x8() {
    let f = xd(8);
    let out = run(&["classify", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["configuration"], serde_json::json!(["8I1(i)", "I16(ii)"]));
    assert_eq!(v["torsion"]["group"], "Z/2");
    assert_eq!(v["det_ns"], 4);
    assert_eq!(v["fixed_point_total"], 8);
    assert_eq!(v["euler_total"], 24);
}

#[test]
fn classify_text_format() {
    let f = xd(3);
    let out = run(&["classify", path(&f), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("configuration: 6I1(i) + I6(ii) + I*6(ii)"));
    assert!(text.contains("det NS: 6"));
}

#[test]
fn mw_rank_flag_is_reported() {
    let f = xd(3);
    let v = json(&run(&["classify", path(&f), "--mw-rank", "1"]));
    assert_eq!(v["picard"], 18);
    assert_eq!(v["det_ns"], Value::Null);
}

#[test]
fn domain_error_names_the_place() {
    let f = file(r#"{"a": ["5"], "b": ["4"]}"#);
    let out = run(&["classify", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "NonMinimalModel");
    assert_eq!(v["place"], "t = inf");
    let f = file(r#"{"a": ["0", "2"], "b": ["0", "0", "1"]}"#);
    assert_eq!(json(&run(&["classify", path(&f)]))["error"], "SingularSurface");
}

#[test]
fn io_errors_exit_1() {
    assert_eq!(run(&["classify", "/nonexistent/surface.json"]).status.code(), Some(1));
    let f = file("{not json");
    assert_eq!(run(&["classify", path(&f)]).status.code(), Some(1));
}

#[test]
fn quotient_crosscheck() {
    let f = xd(2);
    let v = json(&run(&["quotient", path(&f)]));
    assert_eq!(v["crosscheck"], true);
    assert_eq!(v["y_configuration"], serde_json::json!(["I2(i)", "6I2(ii)", "I*4(i)"]));
    assert_eq!(v["report"]["torsion"]["two_torsion_rank"], 2);
}

#[test]
fn lattice_discriminant() {
    let f = file("[[0,1,0,0,0],[1,0,0,0,0],[0,0,2,1,0],[0,0,1,-2,0],[0,0,0,0,-6]]");
    let v = json(&run(&["lattice", path(&f)]));
    assert_eq!(v["discriminant"]["group"], serde_json::json!([30]));
    let f = file("[[2,1],[1,2]]");
    let v = json(&run(&["lattice", path(&f), "--reductions"]));
    assert_eq!(v["det"], "3");
    assert_eq!(v["reductions"], serde_json::json!([]));
    let f = file("[[1,2],[3,4]]");
    assert_eq!(run(&["lattice", path(&f)]).status.code(), Some(2));
}

#[test]
fn theorem_search_output() {
    let out = run(&["theorem-search"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["admissible"], serde_json::json!([1, 2, 3, 5, 7, 15]));
    assert_eq!(v["witnesses"]["15"].as_array().unwrap().len(), 1);
    assert!(v["caveats"]["15"].as_str().unwrap().contains("does not realize"));
    assert_eq!(out.stdout, run(&["theorem-search"]).stdout);
    let out = run(&["theorem-search", "--degeneration", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "NotAdmissible");
}

#[test]
fn isogeny_check_passes_on_smooth_fibers() {
    let f = xd(3);
    let out = run(&["isogeny-check", path(&f), "--t0", "1", "--t0", "3,-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["checked"].as_u64().unwrap() >= 8);
    let out = run(&["isogeny-check", path(&f), "--t0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "SingularFiber");
    assert_eq!(v["place"], "t = 0");
}

#[test]
fn family_builders() {
    let v = json(&run(&["family", "xprime", "--n", "7"]));
    assert_eq!(v["report"]["det_ns"], 14);
    assert_eq!(v["generic"], true);
    let v = json(&run(&["family", "xd", "--d", "5"]));
    assert_eq!(v["report"]["det_ns"], 10);
    let out = run(&["family", "xd", "--d", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "InvalidFamilyParameter");
    let a = run(&["family", "random", "--seed", "3", "--count", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&["family", "random", "--seed", "3", "--count", "5"]).stdout);
    assert_eq!(json(&a)["surfaces"].as_array().unwrap().len(), 5);
}

#[test]
fn paper_tables_command() {
    let v = json(&run(&["paper-tables"]));
    let cols = v["fibers"].as_array().unwrap();
    assert_eq!(cols.len(), 18);
    assert_eq!(cols[1]["surface"], "X_1");
    assert_eq!(cols[1]["at_infinity"], "I*10");
    let text = String::from_utf8(run(&["paper-tables", "--format", "text"]).stdout).unwrap();
    assert!(text.contains("Gamma divisors"));
}
