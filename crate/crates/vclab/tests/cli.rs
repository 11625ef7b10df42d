use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn vc_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vc-lab"))
        .env_remove("VC_LAB_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let out = vc_lab(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (v, out.status.code().unwrap())
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chi_of_k4() {
    let (v, code) = run_json(&["chi", path(&fixture("k4.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "OK");
    assert_eq!(v["command"], "chi");
    let r = &v["results"];
    assert!((f(&r["t"]) - 4.0).abs() < 1e-6);
    assert_eq!(r["rank"]["primal"], 3);
    assert_eq!(r["rank"]["dual"], 1);
    assert_eq!(r["strictly_complementary"], true);
    assert_eq!(r["skeleton"]["edges"].as_array().unwrap().len(), 6);
    assert_eq!(v["inputs"][0]["file"], "k4.json");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn dimacs_and_json_agree() {
    let (a, _) = run_json(&["chi", "--strict", path(&fixture("c5.col"))]);
    let (b, _) = run_json(&["chi", "--strict", path(&fixture("c5.json"))]);
    assert_eq!(a["inputs"][0]["sha256"], b["inputs"][0]["sha256"]);
    assert_eq!(a["results"], b["results"]);
    assert!((f(&a["results"]["strict"]["t"]) - 5f64.sqrt()).abs() < 1e-6);
}

#[test]
fn floats_use_fixed_exponent_format() {
    let out = vc_lab(&["chi", path(&fixture("petersen.col"))]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"t\": 2.500000000"), "{text}");
    assert!(text.contains("\"solve_tol\": 1.000000000000e-09"));
}

#[test]
fn uvc_of_pendant_triangle_moves() {
    let (v, code) = run_json(&["uvc", path(&fixture("k3-pendant.json"))]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["verdict"], "not_unique");
    assert!(f(&r["second_coloring"]["difference"]) >= 1e-6);
    let (v, _) = run_json(&["uvc", path(&fixture("k5.json"))]);
    assert_eq!(v["results"]["verdict"], "unique");
}

#[test]
fn skeleton_and_neighborliness_of_pendant_triangle() {
    let (v, _) = run_json(&["skeleton", path(&fixture("k3-pendant.json"))]);
    assert_eq!(v["results"]["isolated"], serde_json::json!([3]));
    assert_eq!(v["results"]["equals_graph"], false);
    let (v, _) = run_json(&["neighborly", path(&fixture("k3-pendant.json"))]);
    assert_eq!(v["status"], "OK");
    assert_eq!(v["results"]["non_neighborly"], serde_json::json!([3]));
    assert_eq!(v["results"]["consistent_with_skeleton"], true);
}

#[test]
fn product_analyses() {
    let (v, code) = run_json(&[
        "product",
        path(&fixture("k3.json")),
        path(&fixture("k4.json")),
        "--verify-hedetniemi",
        "--rank-accounting",
        "--corollary",
        "--necessary",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "OK");
    let r = &v["results"];
    assert_eq!(r["case"], "less_than");
    assert_eq!(r["verdict"], "all_induced_by_G");
    assert_eq!(r["hedetniemi"]["passed"], true);
    assert_eq!(r["corollary"]["status"], "certified");
    assert_eq!(r["rank_accounting"]["rk"]["product"]["exact"], 2);
    assert_eq!(r["necessary_conditions"]["contradiction"], false);
}

#[test]
fn direct_sum_round_trips_through_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let k3 = fixture("k3.json");
    let (v, code) = run_json(&["direct-sum", path(&k3), path(&k3), "--alpha", "0.25", "--out", path(&out)]);
    assert_eq!(code, 0, "{v}");
    assert!(out.exists());
    let (v, code) = run_json(&["product", path(&k3), path(&k3), "--decompose", path(&out)]);
    assert_eq!(code, 0, "{v}");
    let d = &v["results"]["decompose"];
    assert_eq!(d["decomposable"], true);
    assert!((f(&d["alpha"]) - 0.25).abs() < 1e-6);
    assert_eq!(d["induced_by_g"], false);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.col");
    std::fs::write(&bad, "p edge 3 1\ne 1 9\n").unwrap();
    let out = vc_lab(&["chi", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(out.stdout.is_empty());

    let out = vc_lab(&["chi", path(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_failure_gives_failed_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("none.json");
    std::fs::write(&empty, r#"{"n":0,"edges":[]}"#).unwrap();
    let (v, code) = run_json(&["chi", path(&empty)]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "FAILED");
    assert!(v["results"]["error"].is_string());
}

#[test]
fn config_from_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"solve_tol": 1e-10, "output": "text"}"#).unwrap();
    let out = vc_lab(&["--config", path(&cfg), "chi", path(&fixture("k3.json"))]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("chi: OK"), "{text}");

    let out = Command::new(env!("CARGO_BIN_EXE_vc-lab"))
        .env("VC_LAB_CONFIG", &cfg)
        .args(["--output", "json", "chi", path(&fixture("k3.json"))])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["solve_tol"].as_f64(), Some(1e-10));

    std::fs::write(&cfg, r#"{"solve_tol": 1e-3, "rank_tol": 1e-6}"#).unwrap();
    let out = vc_lab(&["--config", path(&cfg), "chi", path(&fixture("k3.json"))]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, r#"{"solve_tolerance": 1e-9}"#).unwrap();
    let out = vc_lab(&["--config", path(&cfg), "chi", path(&fixture("k3.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_isolates_entries() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("k3.json"), dir.path().join("k3.json")).unwrap();
    let manifest = dir.path().join("m.json");
    std::fs::write(
        &manifest,
        r#"{"entries": [
            {"command": "chi", "graphs": ["k3.json"]},
            {"command": "chi", "graphs": ["absent.json"]},
            {"command": "frobnicate", "graphs": ["k3.json"]},
            {"command": "product", "graphs": ["k3.json"]}
        ]}"#,
    )
    .unwrap();
    let (v, code) = run_json(&["batch", path(&manifest)]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "FAILED");
    let entries = v["results"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert_eq!(entries[0]["status"], "OK");
    assert!(entries[1..].iter().all(|e| e["status"] == "FAILED"));
    assert_eq!(v["results"]["counts"]["failed"], 3);

    std::fs::write(&manifest, r#"{"entries": []}"#).unwrap();
    let (v, code) = run_json(&["batch", path(&manifest)]);
    assert_eq!((code, v["status"].as_str()), (0, Some("OK")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["product", "--rank-accounting", "--corollary"];
    let g = fixture("c5.json");
    let h = fixture("k3.json");
    let mut full: Vec<&str> = args.to_vec();
    full.extend([path(&g), path(&h)]);
    let a = vc_lab(&full).stdout;
    let b = vc_lab(&full).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
