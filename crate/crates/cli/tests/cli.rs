use std::process::{Command, Output};

use serde_json::Value;
use shqa::lweight::LWeight;
use shqa::qchar::TruncatedQChar;

fn shqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shqa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn shqa_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shqa"))
        .args(args)
        .env(shqa_cli::THREADS_ENV, threads)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn qq_tilde_holds() {
    let o = shqa(&["identity", "qq-tilde", "--type", "A2", "--node", "1", "--spec", "0", "--depth", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("holds"));
}

#[test]
fn sl3_pair_module_verifies() {
    let o = shqa(&[
        "module", "verify", "sl3-pair-inflation", "--type", "A3", "--nodes", "1,2", "--basis", "6", "--modes", "2",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn invalid_type_is_a_usage_error() {
    let o = shqa(&["dynkin", "Z9"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn malformed_arguments_are_usage_errors() {
    assert_eq!(code(&shqa(&["identity"])), 2);
    assert_eq!(code(&shqa(&["identity", "qq-tilde", "--depth", "deep"])), 2);
    assert_eq!(code(&shqa(&["identity", "no-such-identity"])), 2);
    assert_eq!(code(&shqa(&["qchar", "kr", "--type", "A2", "--node", "5"])), 2);
    assert_eq!(code(&shqa(&["suite", "--topic", "9"])), 2);
    assert_eq!(code(&shqa(&["--help"])), 0);
}

#[test]
fn failing_check_exits_one() {
    // The R-matrix topic contains a clause whose stated vanishing pattern
    // does not hold.
    let o = shqa(&["suite", "--topic", "6"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL [6]"));
}

#[test]
fn dynkin_json() {
    let o = shqa(&["--format", "json", "dynkin", "B3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["d"], serde_json::json!([2, 2, 1]));
    assert_eq!(v["dual_coxeter"], 5);
    assert_eq!(v["lacing"], 2);
}

#[test]
fn json_documents_reparse() {
    let o = shqa(&["lweight", "psi_star", "--type", "A2", "--node", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    let w: LWeight = serde_json::from_value(v["lweight"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&w).unwrap(), v["lweight"]);
    assert_eq!(w.to_string(), v["text"].as_str().unwrap());

    let o = shqa(&["qchar", "psi-tilde", "--type", "A3", "--node", "2", "--spec", "3", "--depth", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let c: TruncatedQChar = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(c.depth(), 4);
    assert_eq!(v["terms_count"], c.len());
    let again: TruncatedQChar = serde_json::from_value(serde_json::to_value(&c).unwrap()).unwrap();
    assert_eq!(again, c);
}

#[test]
fn sl3_pair_character_term_count() {
    let o = shqa(&["qchar", "sl3-pair", "--type", "A2", "--node", "1", "--node2", "2", "--depth", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["terms_count"], 12);
}

#[test]
fn rmatrix_intertwines_at_q4() {
    let o = shqa(&["--format", "json", "rmatrix", "--a", "4", "--basis", "3", "--modes", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["a_exponent"], 4);
    assert_eq!(v["intertwining"]["first_counterexample"], Value::Null);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let strip = |o: &Output| {
        let mut v = json(o);
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("millis");
        }
        v
    };
    let args = ["--format", "json", "suite", "--topic", "2,5,7"];
    let one = shqa_env(&args, "1");
    let four = shqa_env(&args, "4");
    assert_eq!(code(&one), 0);
    assert_eq!(strip(&one), strip(&four));
}
