use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn lucasdep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lucasdep")).args(args).env_remove("LUCASDEP_CACHE_DIR").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn lucas_term() {
    let out = lucasdep(&["lucas", "--k", "3", "--n", "7"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "64");
    let out = lucasdep(&["lucas", "--k", "10", "--n", "15"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "24500");
    assert!(!lucasdep(&["lucas", "--k", "1", "--n", "3"]).status.success());
}

#[test]
fn search_finds_the_two_solutions() {
    let v = json(&lucasdep(&["search", "--k-range", "2..10", "--n-max", "40"]));
    let hits: Vec<(u64, i64, i64)> =
        v.as_array().unwrap().iter().map(|h| (h["k"].as_u64().unwrap(), h["m"].as_i64().unwrap(), h["n"].as_i64().unwrap())).collect();
    assert_eq!(hits, vec![(2, 0, 3), (3, 0, 7)]);
    let pairwise = json(&lucasdep(&["search", "--k-range", "2..10", "--n-max", "40", "--pairwise"]));
    assert_eq!(pairwise, v);
}

#[test]
fn cfrac_of_log3_log2() {
    let v = json(&lucasdep(&["cfrac", "log3/log2", "--m", "1e114"]));
    assert_eq!(v["n"], 229);
    assert_eq!(v["max_quotient"], "100");
    assert_eq!(v["max_index"], 218);
    let r = json(&lucasdep(&["cfrac", "3.245", "--m", "1000"]));
    assert_eq!(r["quotients"][0], "3");
}

#[test]
fn lll_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lucasdep"))
        .arg("lll")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"dim": 2, "columns": [[1, 0], [1000, 1]]}"#).unwrap();
    let v = json(&child.wait_with_output().unwrap());
    assert_eq!(v["dim"], 2);
    let cols = v["columns"].as_array().unwrap();
    let norm: i64 = cols[0].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse::<i64>().unwrap().pow(2)).sum();
    assert_eq!(norm, 1);
}

#[test]
fn prove_k2_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("proof.json");
    let out = lucasdep(&["prove", "--k-range", "2..2", "--report", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v[0]["k"], 2);
    assert_eq!(v[0]["solutions"][0]["n"], 3);
    assert_eq!(v[0]["large_k_branch"]["final_k_bound"], 933);
    assert!(String::from_utf8_lossy(&out.stderr).contains("solutions [(0, 3)]"));
}

#[test]
fn bad_range_is_an_error() {
    assert!(!lucasdep(&["prove", "--k-range", "3-5"]).status.success());
    assert!(!lucasdep(&["prove", "--k-range", "2..1001"]).status.success());
}
