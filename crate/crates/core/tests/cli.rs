use std::path::Path;
use std::process::Command;

use morava::cli::run;
use serde_json::Value;

fn morava(args: &[&str]) -> (i32, String) {
    run(std::iter::once("morava").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--format", "json", "--no-timing"];
    a.extend_from_slice(args);
    let (code, out) = morava(&a);
    assert_eq!(code, 0, "{out}");
    serde_json::from_str(&out).unwrap()
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_morava"));
    c.env_remove(morava::cli::CACHE_ENV);
    c
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

#[test]
fn honda_report_matches_golden() {
    let got = json(&["honda", "--p", "3", "--n", "1", "-N", "8"]);
    let want: Value = serde_json::from_str(include_str!("golden/honda_p3_n1_N8.json")).unwrap();
    assert_eq!(got, want);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--seed", "5", "fiber", "--p", "3", "--n", "2", "--window", "2", "kappa", "--band=-40:0"];
    let (a, b) = (json(&args), json(&args));
    assert_eq!(a, b);
    assert_eq!(a["config"]["seed"], 5);
    assert!(a["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn series_arithmetic() {
    let v = json(&["series", "--p", "3", "--n", "1", "-N", "8", "inverse", "x + v*x^3"]);
    // over Z the next terms are 3v^2x^5 - 12v^3x^7; both vanish mod 3
    assert_eq!(v["output"]["series"], "x - v*x^3");
    let v = json(&["series", "--p", "3", "--n", "1", "-N", "8", "mul", "x + v*x^3", "x - v*x^3"]);
    assert_eq!(v["output"]["series"], "x^2 - v^2*x^6");
}

#[test]
fn aut_compose_and_invert() {
    let v = json(&["aut", "--group", "ga", "--p", "3", "--n", "2", "--R", "dual(-4)", "invert", "x + eps*x^3"]);
    assert_eq!(v["output"]["series"], "x - eps*x^3");
    let v = json(&["aut", "--group", "GA", "--p", "3", "--n", "2", "--R", "dual(-1)", "compose", "e + eps*x ; x", "e ; x"]);
    assert_eq!(v["output"]["result"]["group"], "GA");
}

#[test]
fn hopf_points_over_dual_numbers() {
    let v = json(&["hopf", "--which", "A", "--p", "3", "--n", "2", "points", "--R", "dual(-4)"]);
    assert_eq!(v["output"]["order"], 3);
    assert_eq!(v["output"]["cyclic"], true);
}

#[test]
fn algebra_files_load() {
    for f in ["k1_p3.pres", "k2_p3.pres", "k1_p5.pres", "dual_odd_p3n2.pres", "dual_t1_p3n2.pres", "dual_t1_p5n1.pres", "trunc_p3n2.pres"] {
        let text = std::fs::read_to_string(data(f)).unwrap();
        let a = morava::galgebra::parse_presentation(&text).unwrap_or_else(|e| panic!("{f}: {e}"));
        let (p, n) = (a.p(), a.height());
        morava::cli::resolve_algebra(Some(&data(f)), p, n).unwrap();
    }
    let v = json(&["fiber", "--p", "3", "--n", "2", "--window", "2", "--functor", "C", "--R", &data("dual_odd_p3n2.pres"), "corep"]);
    assert_eq!(v["output"]["values"], 9);
}

#[test]
fn exit_codes() {
    // bad configuration
    let (code, out) = morava(&["honda", "--p", "4", "--n", "1", "-N", "5"]);
    assert_eq!(code, 2, "{out}");
    // an inhomogeneous series is an input error
    let (code, _) = morava(&["aut", "--group", "ga", "--p", "3", "--n", "2", "--R", "dual(-4)", "validate", "x + eps*x^2"]);
    assert_eq!(code, 2);
    // homogeneous but not additive: a failing check
    let (code, out) = morava(&["aut", "--group", "ga", "--p", "3", "--n", "2", "--R", "trunc(-4,3)", "validate", "x + u^2*x^5"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("[FAIL]"));
    // [4](x) is a strict automorphism since 4 ≡ 1 mod 3; its first-order
    // shadow x + v x^3 is not
    let law = morava::fgl::honda(3, 1, 10).unwrap().fgl.clone();
    let x = morava::series::TruncatedSeries::variable(morava::series::even_vars(&["x"]), 10, law.alg().clone(), 0);
    let four = law.formal_sum(&[x.clone(), x.clone(), x.clone(), x]).unwrap().render();
    let (code, out) = morava(&["aut", "--group", "hn", "--p", "3", "--n", "1", "--window", "1", "validate", &four]);
    assert_eq!(code, 0, "{four}: {out}");
    let (code, _) = morava(&["aut", "--group", "hn", "--p", "3", "--n", "1", "--window", "1", "validate", "x + v*x^3"]);
    assert_eq!(code, 1);
    // t_1 ↦ ε breaks t_1^9 = v^2 t_1
    let (code, _) = morava(&["aut", "--group", "hn", "--p", "3", "--n", "2", "--R", "dual(-4)", "--window", "1", "validate", "x + eps*x^3"]);
    assert_eq!(code, 1);
    let st = bin().args(["bogus"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--format", "json", "--no-timing", "honda", "--p", "3", "--n", "2", "-N", "12"];
    let first = bin().args(args).env(morava::cli::CACHE_ENV, dir.path()).output().unwrap();
    assert!(first.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some(), "nothing written to the cache");
    let second = bin().args(args).env(morava::cli::CACHE_ENV, dir.path()).output().unwrap();
    assert!(second.status.success());
    assert!(String::from_utf8_lossy(&second.stderr).contains("loaded from cache"));
    assert_eq!(first.stdout, second.stdout);
    let fresh = bin().args(args).output().unwrap();
    assert_eq!(first.stdout, fresh.stdout);
}
