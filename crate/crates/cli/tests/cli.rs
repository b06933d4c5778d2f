use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projperm")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_projperm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn count_reports_m_and_h() {
    let out = run(&["count", "--field", "p=3;auto;n=2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["M"], 24);
    assert_eq!(v["H"], 4);
    assert_eq!(v.as_object().unwrap().len(), 2);
}

#[test]
fn count_enumeration_agrees() {
    let v = json_of(&run(&["count", "--field", "p=2;auto;n=3", "--enumerate"]));
    assert_eq!(v["M"], 168);
    assert_eq!(v["M_enumerated"], 168);
    assert_eq!(v["H"], v["H_enumerated"]);
}

#[test]
fn construct_class_preserving_is_permutation() {
    let out = run(&["construct", "--family", "thm36", "--field", "p=3;auto;n=2", "--r", "3", "--h", "x^3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["is_permutation"], true);
    assert_eq!(v["verification"]["passed"], true);
    assert_eq!(v["branches"].as_array().unwrap().len(), 2);
}

#[test]
fn construct_then_verify_and_interpolate_roundtrip() {
    let built = run(&["construct", "--family", "prop312", "--field", "p=2;auto;n=3"]);
    assert_eq!(built.status.code(), Some(0));
    let text = String::from_utf8(built.stdout).unwrap();
    let full = serde_json::from_str::<Value>(&text).unwrap()["polynomial"].clone();

    let ver = run_stdin(&["verify", "-"], &text);
    assert_eq!(ver.status.code(), Some(0));
    assert_eq!(json_of(&ver)["is_permutation"], true);

    let interp = run_stdin(&["interpolate", "-"], &text);
    assert_eq!(interp.status.code(), Some(0));
    assert_eq!(json_of(&interp)["terms"], full["terms"]);
}

#[test]
fn quadratic_family_samples_parameters_from_seed() {
    let a = json_of(&run(&["construct", "--family", "thm37", "--field", "p=3;auto;n=2", "--seed", "7"]));
    let b = json_of(&run(&["construct", "--family", "thm37", "--field", "p=3;auto;n=2", "--seed", "7"]));
    assert_eq!(a["is_permutation"], true);
    assert_eq!(a["family"], b["family"]);
}

#[test]
fn quadratic_family_rejects_equal_u_and_v() {
    let out = run(&[
        "construct", "--family", "thm37", "--field", "p=3;auto;n=2", "--h", "x", "--a", "1", "--b", "1",
        "--u", "1", "--v", "1", "--w", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn fast_level_skips_exhaustive_checks() {
    let v = json_of(&run(&["construct", "--family", "thm310", "--field", "p=3;auto;n=2", "--level", "fast"]));
    assert_eq!(v["verification"]["level"], "fast");
    assert_eq!(v["is_permutation"], true);
    assert!(v.get("polynomial").is_none());
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["count", "--field", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["field", "--field", "p=4;auto;n=2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/perm.json"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["verify", "-"], "{not json").status.code(), Some(2));
    assert_eq!(run(&["construct", "--field", "p=3;auto;n=2"]).status.code(), Some(2));
}

#[test]
fn field_size_cap_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_projperm"))
        .args(["field", "--field", "p=3;auto;n=4"])
        .env("PROJPERM_MAX_FIELD", "27")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["field", "--field", "p=3;auto;n=4"]).status.code(), Some(0));
}

#[test]
fn field_describes_elements() {
    let v = json_of(&run(&["field", "--field", "p=3;auto;n=2", "--elem", "g^2"]));
    assert_eq!(v["q"], 3);
    assert_eq!(v["order"], 9);
    let e = &v["elements"][0];
    assert_eq!(e["log"], 2);
    assert_eq!(e["order"], 4);
}

#[test]
fn gmt_reports_partitions() {
    let v = json_of(&run(&["gmt", "--field", "p=2;auto;n=3", "--basis-w", "normal", "--psi", "--partitions"]));
    assert_eq!(v["psi"].as_array().unwrap().len(), 7);
    assert_eq!(v["cofactors"].as_array().unwrap().len(), 3);
}

#[test]
fn hirschfeld_maps_are_bijective() {
    let v = json_of(&run(&["hirschfeld", "--field", "p=3;auto;n=2"]));
    let roots: usize = v["polynomials"].as_array().unwrap().iter().map(|p| p["roots"].as_array().unwrap().len()).sum();
    assert_eq!(roots, 4);
}

#[test]
fn text_format_flattens_keys() {
    let out = run(&["count", "--field", "p=3;auto;n=2", "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("M: 24"));
    assert!(s.contains("H: 4"));
}

#[test]
fn selftest_small_grid_passes() {
    let out = run(&["selftest", "--grid", "small", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 12);
}

#[test]
fn cubic_example_over_f8_is_permutation() {
    let out = run(&["construct", "--family", "thm36", "--field", "p=2;base=[1,1,0,1];n=3", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["is_permutation"], true);
    assert_eq!(v["branches"].as_array().unwrap().len(), 3);
    assert_eq!(v["index"]["r"], 2);
}
