//! The `gaplab` binary end to end.

use std::process::{Command, Output};

fn gaplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaplab")).args(args).env_remove("GAPLAB_MAX_VARS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_prints_the_verdict_line() {
    let o = gaplab(&["classify", "corpus:plus1in3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "II2; CSP, NTriv, SEP, (2,F)-Robust: NP-complete; GAP(N_CSP, Y_SEP∩(2,F))\n");
    let o = gaplab(&["classify", "corpus:implication"]);
    assert_eq!(stdout(&o), "TRACTABLE(∧); CSP, NTriv, SEP, (2,F)-Robust: P; no gap\n");
}

#[test]
fn weak_base_prints_the_closure() {
    let o = gaplab(&["weak-base", "IN2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# IN2: 6 x 8\n"));
    assert_eq!(text.lines().skip(1).count(), 6);
    assert!(text.contains("01010101\n") && text.contains("10101010\n"));
}

#[test]
fn verify_star_gap_passes_reproducibly() {
    let args = ["verify", "star-gap", "--trials", "200", "--seed", "7", "--format", "structured"];
    let a = gaplab(&args);
    let b = gaplab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("pass: true\n"));
}

#[test]
fn failing_property_exits_one() {
    let o = gaplab(&["verify", "weak-base-goldens"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn max_vars_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gaplab"))
        .args(["verify", "star-preserve", "--trials", "5"])
        .env("GAPLAB_MAX_VARS", "x")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_writes_instance_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.txt");
    let cert = dir.path().join("t.cert");
    let o = gaplab(&[
        "reduce",
        "sharp",
        "corpus:one-clause",
        "--out",
        out.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let target = std::fs::read_to_string(&out).unwrap();
    assert!(target.contains("bottop bot top either\n"));
    let c = std::fs::read_to_string(&cert).unwrap();
    assert!(c.starts_with("reduction: sharp\n"));
    let solved = gaplab(&["solve", "ntriv", out.to_str().unwrap()]);
    assert_eq!(solved.status.code(), Some(0));
}

#[test]
fn solve_answers_and_usage_errors() {
    assert_eq!(gaplab(&["solve", "sep", "corpus:k4"]).status.code(), Some(1));
    assert_eq!(gaplab(&["solve", "csp", "corpus:one-clause", "--engine", "fast"]).status.code(), Some(2));
    assert_eq!(gaplab(&["solve", "equiv", "corpus:one-clause", "corpus:one-clause"]).status.code(), Some(0));
    assert_eq!(gaplab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gaplab(&["corpus"]).status.code(), Some(0));
}
