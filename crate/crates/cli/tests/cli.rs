use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bundles() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "bundles"].iter().collect()
}

fn bundle(name: &str) -> String {
    bundles().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logunit")).args(args).output().expect("spawn logunit")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let o = run(&a);
    let v = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr)));
    (o.status.code().unwrap(), v)
}

#[test]
fn regulator_sqrt2() {
    let (code, v) = json(&["regulator", "--bundle", &bundle("q_sqrt2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "logunit-report/v1");
    assert_eq!(v["ok"], true);
    let mid = v["result"]["regulator"]["mid"].as_str().unwrap();
    // log(1 + sqrt 2)
    assert!(mid.starts_with("8.8137358701954302523260932497979230902816"), "{mid}");
}

#[test]
fn elim_three_variables() {
    let o = run(&["elim", "--coeffs", "1,1,1"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("x0^2 - 2*x0*x1 - 2*x0*x2 + x1^2 - 2*x1*x2 + x2^2"), "{s}");
}

#[test]
fn elim_negative_coefficients() {
    let (code, v) = json(&["elim", "--coeffs", "2,-3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["product"], "4*x0^2 - 9*x1^2");
}

#[test]
fn every_golden_bundle_validates() {
    let mut n = 0;
    for e in std::fs::read_dir(bundles()).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "json") {
            let o = run(&["validate-bundle", p.to_str().unwrap()]);
            assert!(o.status.success(), "{}: {}", p.display(), String::from_utf8_lossy(&o.stdout));
            n += 1;
        }
    }
    assert!(n >= 9);
}

#[test]
fn invalid_bundle_exits_one() {
    let src = std::fs::read_to_string(bundles().join("q_sqrt2.json")).unwrap();
    let mut v: Value = serde_json::from_str(&src).unwrap();
    v["units"] = serde_json::json!([["2", "1"]]);
    let dir = std::env::temp_dir().join(format!("logunit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let (code, out) = json(&["validate-bundle", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out["ok"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["regulator", "--bundle", "/nonexistent/bundle.json"]).status.code(), Some(2));
    assert_eq!(run(&["elim", "--coeffs", "1,x"]).status.code(), Some(2));
}

#[test]
fn json_is_deterministic() {
    let args = ["--format", "json", "lattice", "gram", "--bundle"];
    let b = bundle("q_zeta7plus.json");
    let mut a: Vec<&str> = args.to_vec();
    a.push(&b);
    let first = run(&a).stdout;
    let second = run(&a).stdout;
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn septic_pair_report() {
    let (code, v) = json(&["--prec", "256", "pair-report", "--a", &bundle("septic_a.json"), "--b", &bundle("septic_b.json")]);
    assert_eq!(code, 0, "{v}");
    let s = v.to_string();
    assert!(s.contains("NotSimilar"), "{s}");
    assert!(s.contains("NotIsometric"), "{s}");
}

#[test]
fn lattice_isometry_and_similarity() {
    let a = bundle("q_sqrt2.json");
    let (code, v) = json(&["lattice", "isometry", &a, &a]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"]["tag"], "Isometric");
    let (code, v) = json(&["lattice", "similarity", &a, &bundle("q_sqrt3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"]["tag"], "Similar");
    let (code, v) = json(&["lattice", "isometry", &a, &bundle("q_sqrt3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"]["tag"], "NotIsometric");
}

#[test]
fn gassmann_septic() {
    let (code, v) = json(&["gassmann", "--bundle", &bundle("septic_a.json"), "--h1", "point", "--h2", "line"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["equivalent"], true);
    assert_eq!(v["result"]["conjugate"], false);
}

#[test]
fn relations_among_logs() {
    let o = run(&["relations", "--log", "2", "--log", "3", "--log", "6"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("FOUND"));
}
