use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_str().unwrap().to_string()
}

fn icmech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icmech")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_the_worked_example() {
    let v = json(&icmech(&["solve", &data("triangle_with_pendant.json"), "--mechanism", "alg1_instant"]));
    assert_eq!(v["outcome"]["welfare"], 100_000);
    assert_eq!(v["outcome"]["payments"], serde_json::json!([0, 0, 400_000, 500_000]));
}

#[test]
fn overbid_prices() {
    let f = data("mutual_chain_overbid.json");
    let vcg = json(&icmech(&["price", &f, "--mechanism", "alg2_vcg"]));
    assert_eq!(vcg["payments"][0], 450_000);
    let gap = json(&icmech(&["price", &f, "--mechanism", "alg2_maxc"]));
    assert_eq!(gap["payments"][0], 600_000);
}

#[test]
fn audit_and_oracle() {
    let v = json(&icmech(&["audit", &data("mutual_chain.json"), "--mechanism", "alg2_maxc"]));
    assert_eq!(v["violations"], serde_json::json!([]));
    let v = json(&icmech(&["audit", &data("mutual_chain.json"), "--mechanism", "alg2_vcg", "--grid", "0.55,0.7"]));
    assert_eq!(v["violations"][0]["gain"], 100_000);
    let v = json(&icmech(&["oracle", &data("triangle_with_pendant.json"), "--mode", "instant"]));
    assert_eq!(v["welfare"], 100_000);
}

#[test]
fn generated_files_feed_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let out = icmech(&["gen", "random", "--n", "5", "--h", "2", "--seed", "4"]);
    assert!(out.status.success());
    let path = dir.path().join("i.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let v = json(&icmech(&["solve", path.to_str().unwrap(), "--mechanism", "sqrtn"]));
    assert!(v["outcome"]["welfare"].as_i64().unwrap() >= 0);
    let full = json(&icmech(&["gen", "isred", &data("triangle.edges"), "--full"]));
    assert_eq!(full["expected"]["min_transmissions"], 5);
}

#[test]
fn exit_codes() {
    let guard = icmech(&["solve", &data("mutual_chain.json"), "--mechanism", "vcg_general", "--guard-n", "3"]);
    assert_eq!(guard.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&guard.stderr).contains("cycle packing vertices"));
    assert_eq!(icmech(&["solve", "missing.json", "--mechanism", "sqrtn"]).status.code(), Some(1));
    assert_eq!(icmech(&["solve", &data("triangle.edges"), "--mechanism", "sqrtn"]).status.code(), Some(1));
    assert_eq!(icmech(&["gen", "random", "--n", "3", "--h", "3"]).status.code(), Some(1));
    assert_eq!(icmech(&["solve", &data("mutual_chain.json"), "--mechanism", "nope"]).status.code(), Some(1));
}
