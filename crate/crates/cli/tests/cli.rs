use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn optwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optwist")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

#[test]
fn vectors_pass() {
    let out = optwist(&["vectors"]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert!(r["result"]["checks"].as_array().unwrap().len() >= 6);
}

#[test]
fn br_axioms() {
    let out = optwist(&["axioms", "--operad", "br", "--max-arity", "3", "--neutral-cap", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn br_two_cohomology() {
    let out = optwist(&["cohomology", "--complex", "br", "--arity", "2", "--deg-min", "-3", "--deg-max", "1"]);
    assert!(out.status.success());
    let h = &report(&out)["result"]["cohomology"];
    assert_eq!(h["0"], 1);
    assert_eq!(h["-1"], 1);
    assert_eq!(h["-2"], 0);
}

#[test]
fn mc_and_coalgebra() {
    assert!(optwist(&["mc-check", "--which", "alpha-G", "--max-arity", "3"]).status.success());
    assert!(optwist(&["mc-check", "--which", "bt-jacobi", "--max-arity", "3"]).status.success());
    assert!(optwist(&["coalgebra", "--operad", "ger", "--max-arity", "2"]).status.success());
}

#[test]
fn hochschild_suites() {
    let a = data("dual_numbers.json");
    for s in ["d2", "bracket", "braces"] {
        let out = optwist(&["hochschild", "--algebra", &a, "--m-cap", "3", "--suite", s]);
        assert!(out.status.success(), "{s}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = optwist(&["hochschild", "--algebra", &a, "--m-cap", "4", "--suite", "d2"]);
    let h = &report(&out)["result"]["cohomology"];
    // the center of a commutative algebra is all of it
    assert_eq!(h["0"], 2);
    let bad = optwist(&["hochschild", "--algebra", &data("not_associative.json"), "--m-cap", "3", "--suite", "d2"]);
    assert!(!bad.status.success());
}

#[test]
fn fprime_on_shipped_map() {
    let map = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/ger_inf_to_twbt.json");
    let out = optwist(&["fprime", "--map", map.to_str().unwrap(), "--max-arity", "3", "--check-br"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report(&out)["result"]["report"]["forbidden"]["clean"], true);
}

#[test]
fn reports_are_reproducible() {
    let args = ["axioms", "--operad", "ger", "--max-arity", "3", "--seed", "5"];
    assert_eq!(optwist(&args).stdout, optwist(&args).stdout);
}

#[test]
fn usage_errors() {
    let out = optwist(&["axioms", "--operad", "nope", "--max-arity", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["error"].as_str().unwrap().contains("nope"));
    assert!(!optwist(&["frobnicate"]).status.success());
}
