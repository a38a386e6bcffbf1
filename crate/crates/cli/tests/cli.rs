//! End-to-end checks of the binary: exit-code contract, stdin input,
//! output determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_kronmod");

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn kronmod");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

const NU1: &str = r#"[[{"x":"1"},{"y":"1"}],[{"z":"1"},{"w":"1"}]]"#;

#[test]
fn inv_reports_all_invariants() {
    let out = run_with_stdin(&["inv", "--json"], NU1);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["epsilon"], "1");
    assert_eq!(v["rho"], "1");
    assert_eq!(v["res_det"], "1");
    assert_eq!(v["epsilon_sq_eq_rho"], true);
    assert_eq!(v["det"]["xw"], "1");
    assert_eq!(v["det"]["yz"], "-1");
}

#[test]
fn inv_of_the_zero_module_is_consistent() {
    let out = run_with_stdin(&["inv", "--json"], r#"[[{},{}],[{},{}]]"#);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["det"], serde_json::json!({}));
    assert_eq!(v["epsilon"], "0");
    assert_eq!(v["rho"], "0");
    assert_eq!(v["epsilon_sq_eq_rho"], true);
}

#[test]
fn malformed_input_exits_two() {
    let out = run_with_stdin(&["inv"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    let out = run_with_stdin(&["inv"], r#"[[{"t":"1"}]]"#);
    assert_eq!(out.status.code(), Some(2));
    let out = run_with_stdin(&["inv", "--field", "fp:4"], NU1);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn needs_extension_exits_three() {
    // res(x^2 - yz + 2w^2) = -8 is not a rational square: the fiber over
    // this quadric has no points in the active field
    let out = run_with_stdin(&["fiber"], r#"{"x2":"1","yz":"-1","w2":"2"}"#);
    assert_eq!(out.status.code(), Some(3), "res = -8 is not a square");
}

#[test]
fn classify_and_beta_on_boundary_regions() {
    let w1 = r#"{"a1":"1","u11":{"u1":"1"},"v11":{"v1":"1"},"u22":{"u2":"1"},"v22":{"v2":"1"}}"#;
    let out = run_with_stdin(&["classify", "--json"], w1);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["region"], "W1");

    let out = run_with_stdin(&["beta", "--json"], w1);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["point"]["p"], "1");
    assert_eq!(v["point"]["q"]["xw"], "1");

    let out = run_with_stdin(&["classify"], r#"{"a1":"0","a2":"0"}"#);
    assert_eq!(out.status.code(), Some(2), "invalid region");
}

#[test]
fn nf_round_trips_the_normal_form_example() {
    let input = r#"[[{"x":"1","w":"1"},{"y":"1"}],[{"z":"1"},{"x":"1","w":"3"}]]"#;
    let out = run_with_stdin(&["nf", "--json"], input);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lambda"], "1");
    assert_eq!((v["a"].clone(), v["d"].clone()), ("1".into(), "3".into()));
    assert_eq!(v["replay_ok"], true);
}

#[test]
fn stab_reports_agreement_and_witness() {
    let strictly = r#"[[{"x":"1"},{"y":"1"}],[{},{"x":"1"}]]"#;
    let out = run_with_stdin(&["stab", "--json"], strictly);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["semistable"], true);
    assert_eq!(v["stable"], false);
    assert_eq!(v["agreement"], true);
    assert!(v["witness"].is_object());
}

#[test]
fn check_is_byte_deterministic_and_gates() {
    let args = [
        "check", "--suite", "epsilon-rho", "--field", "fp:10007", "--seed", "9", "--trials", "500",
    ];
    let a = Command::new(BIN).args(args).output().unwrap();
    let b = Command::new(BIN).args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let out = Command::new(BIN)
        .args(["check", "--suite", "epsilon-rho", "--trials", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(BIN)
        .args(["check", "--suite", "unknown"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eta_rejects_non_semistable_input() {
    let zero = r#"[[{},{}],[{},{}]]"#;
    let out = run_with_stdin(&["eta"], zero);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fp_field_flag_reduces_residues() {
    let out = run_with_stdin(&["inv", "--field", "fp:7", "--json"], NU1);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["field"], "fp:7");
    assert_eq!(v["det"]["yz"], "6");
}
