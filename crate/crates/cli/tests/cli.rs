use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn farkas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farkas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = farkas(&all);
    let code = out.status.code().unwrap();
    (serde_json::from_slice(&out.stdout).unwrap_or(Value::Null), code)
}

fn run_on(cmd: &str, file: &str) -> (Value, i32) {
    let path = problem(file);
    json_of(&[cmd, path.to_str().unwrap()])
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("farkas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_example1_is_vacuous() {
    let (v, code) = run_on("check", "example1.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "VacuousHiddenAssumptionFails");
    assert_eq!(v["result"]["diagnosis"]["recession_witness"], serde_json::json!(["1", "1"]));
    assert_eq!(v["result"]["oracle"], Value::Null);
}

#[test]
fn fm_example1_is_true() {
    let (v, code) = run_on("fm", "example1.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["farkas_minkowski"], true);
}

#[test]
fn fm_reports_offending_ray() {
    let (v, _) = run_on("fm", "sigma_nc.json");
    assert_eq!(v["result"]["farkas_minkowski"], false);
    let ray = &v["result"]["offending_ray"];
    assert!(ray == &serde_json::json!(["0", "1", "0"]) || ray == &serde_json::json!(["0", "-1", "0"]));
    let (c, _) = run_on("check", "sigma_nc.json");
    assert_eq!(c["result"]["verdict"], "AsymptoticConsequence");
}

#[test]
fn infeasible_pair_has_dual_certificate() {
    let (v, code) = run_on("consistency", "infeasible_pair.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["consistent"], false);
    let cert = &v["result"]["dual_certificate"];
    assert_eq!(cert["terms"].as_array().unwrap().len(), 2);
    assert_eq!(cert["exact"], true);
}

#[test]
fn diagnose_warns_when_hidden_assumption_fails() {
    let out = farkas(&["diagnose", problem("example1.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("equivalence not applicable: A ∩ dom f = ∅"), "{text}");
    assert!(text.contains("d = (1, 1)"), "{text}");

    let out = farkas(&["diagnose", problem("box_budget.json").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("not applicable: A"), "{text}");
}

#[test]
fn certificate_round_trip() {
    let p = problem("half_line.json");
    let p = p.to_str().unwrap();
    let (v, _) = json_of(&["certify", p]);
    assert_eq!(v["result"]["certificate"]["multipliers"][0]["lambda"], "1");
    let good = scratch("cert.json");
    std::fs::write(&good, serde_json::to_vec(&v).unwrap()).unwrap();
    let (ok, code) = json_of(&["certify", p, "--verify", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(ok["result"]["verified"], true);

    let mut tampered = v.clone();
    tampered["result"]["certificate"]["multipliers"][0]["lambda"] = "2".into();
    let bad = scratch("tampered.json");
    std::fs::write(&bad, serde_json::to_vec(&tampered).unwrap()).unwrap();
    let (rej, _) = json_of(&["certify", p, "--verify", bad.to_str().unwrap()]);
    assert_eq!(rej["result"]["verified"], false);
}

#[test]
fn optimal_and_kkt() {
    let (v, _) = run_on("optimal", "kkt_example.json");
    assert_eq!(v["result"]["optimal"], true);
    assert_eq!(v["result"]["direct"]["value"], "1");
    let (k, _) = run_on("kkt", "kkt_example.json");
    assert_eq!(k["result"]["certificate"]["multipliers"][0]["lambda"], "1");
    assert_eq!(k["result"]["certificate"]["verified"], true);
    assert_eq!(k["result"]["hypothesis_unverified"], false);
}

#[test]
fn input_errors_exit_one_and_name_the_path() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"dimension": 2, "objective": {"form": "affine", "a": [1], "b": 0}}"#).unwrap();
    let out = farkas(&["hidden", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("objective.a"));

    let out = farkas(&["check", problem("infeasible_pair.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("objective"));
}

#[test]
fn resource_limit_exits_two() {
    let out = farkas(&["fm", problem("box_budget.json").to_str().unwrap(), "--max-generators", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let a = farkas(&["check", problem("box_budget.json").to_str().unwrap(), "--json", "--seed", "9"]);
    let b = farkas(&["check", problem("box_budget.json").to_str().unwrap(), "--json", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_passes_and_detects_corrupted_golden() {
    let out = farkas(&["selftest", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let golden = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden/example1.json")).unwrap();
    let corrupted = golden.replace(r#""direction": [1, 1]"#, r#""direction": [1, 2]"#);
    assert_ne!(golden, corrupted);
    let path = scratch("golden.json");
    std::fs::write(&path, corrupted).unwrap();
    let out = farkas(&["selftest", "--golden", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("recession_witness"));
}
