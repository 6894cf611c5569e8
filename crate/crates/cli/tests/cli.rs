use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const P3: &str = r#"{"kind":"general","vertices":[{"id":0},{"id":1},{"id":2}],"edges":[[0,1],[1,2]]}"#;

fn blockade(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockade"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p3.json"), P3).unwrap();
    let chain = r#"{"kind":"unitdisk","radius":1.0,"vertices":[
        {"id":0,"pos":[0.0,0.0]},{"id":1,"pos":[0.8,0.0]},{"id":2,"pos":[1.6,0.0]}]}"#;
    std::fs::write(dir.path().join("chain3.json"), chain).unwrap();
    dir
}

#[test]
fn solve_mis_on_p3() {
    let dir = setup();
    let v = json_stdout(&blockade(dir.path(), &["solve", "mis", "--graph", "p3.json"]));
    assert_eq!(v["set"], serde_json::json!([0, 2]));
    assert_eq!(v["objective"], 2.0);
    assert_eq!(v["flags"]["independent"], true);
}

#[test]
fn count_on_p3() {
    let dir = setup();
    let v = json_stdout(&blockade(dir.path(), &["count", "--graph", "p3.json"]));
    assert_eq!(v["z"], 5.0);
    assert_eq!(v["count"], "5");
}

#[test]
fn adiabatic_three_chain_reaches_the_mis() {
    let dir = setup();
    let gs = json_stdout(&blockade(dir.path(), &["sim", "groundstate", "--graph", "chain3.json"]));
    assert_eq!(gs["bitstrings"], serde_json::json!(["r1r"]));
    let v = json_stdout(&blockade(
        dir.path(),
        &["sim", "adiabatic", "--graph", "chain3.json", "--duration", "60", "--shots", "2000", "--seed", "1"],
    ));
    let exact = v["exact_success_probability"].as_f64().unwrap();
    assert!(exact > 0.99, "{exact}");
    // sampled success within five binomial standard errors of the exact value
    let raw = v["raw_success"].as_f64().unwrap();
    let se = (exact * (1.0 - exact) / 2000.0).sqrt().max(1.0 / 2000.0);
    assert!((raw - exact).abs() <= 5.0 * se, "raw {raw}, exact {exact}");
    assert_eq!(v["best_set"], serde_json::json!([0, 2]));
}

#[test]
fn exit_codes() {
    let dir = setup();
    let code = |args: &[&str]| blockade(dir.path(), args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["--version"]), Some(0));
    assert_eq!(code(&["solve", "mis"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["solve", "mis", "--graph", "missing.json"]), Some(2));
    std::fs::write(dir.path().join("bad.json"), "{not json").unwrap();
    assert_eq!(code(&["solve", "mis", "--graph", "bad.json"]), Some(2));
    assert_eq!(code(&["count", "--graph", "p3.json", "--nu=-1"]), Some(2));
    assert_eq!(code(&["solve", "mis", "--graph", "p3.json", "--bnb-cap", "2"]), Some(3));
    assert_eq!(code(&["count", "--graph", "p3.json", "--enum-cap", "1", "--memo-budget", "0"]), Some(3));
}

#[test]
fn out_dir_has_manifest_and_artifacts() {
    let dir = setup();
    let out = blockade(dir.path(), &["solve", "mwis", "--graph", "p3.json", "--out", "run", "--format", "csv"]);
    assert!(out.status.success());
    let m: Value = serde_json::from_slice(&std::fs::read(dir.path().join("run/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "solve mwis");
    assert_eq!(m["inputs"][0]["path"], "p3.json");
    assert_eq!(m["artifacts"][0]["path"], "solution.csv");
    let csv = std::fs::read_to_string(dir.path().join("run/solution.csv")).unwrap();
    assert_eq!(csv, "vertex,in_set\n0,1\n1,0\n2,1\n");
}

#[test]
fn replay_refuses_changed_inputs() {
    let dir = setup();
    assert!(blockade(dir.path(), &["count", "--graph", "p3.json", "--out", "run"]).status.success());
    assert!(blockade(dir.path(), &["replay", "run/manifest.json"]).status.success());
    std::fs::write(dir.path().join("p3.json"), P3.replace("[1,2]", "[0,2]")).unwrap();
    assert_eq!(blockade(dir.path(), &["replay", "run/manifest.json"]).status.code(), Some(2));
}

#[test]
fn reduce_then_decode() {
    let dir = setup();
    std::fs::write(dir.path().join("f.cnf"), "p cnf 2 3\n1 2 0\n-1 0\n-2 0\n").unwrap();
    assert!(blockade(dir.path(), &["reduce", "sat", "--cnf", "f.cnf", "--out", "red"]).status.success());
    let v = json_stdout(&blockade(dir.path(), &["decode", "--cert", "red/certificate.json"]));
    assert_eq!(v["answer"]["satisfiable"], false);

    let v = json_stdout(&blockade(dir.path(), &["reduce", "paintshop", "--sequence", "ABAB"]));
    assert_eq!(v["source"]["kind"], "paintshop");
}

#[test]
fn samples_are_independent_sets() {
    let dir = setup();
    let out = blockade(dir.path(), &["sample", "greedy", "--graph", "p3.json", "--count", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let sets: Vec<Value> = text.lines().skip(1).map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(sets.len(), 20);
    for s in sets {
        let s = s["set"].clone();
        assert!(s == serde_json::json!([0, 2]) || s == serde_json::json!([1]), "{s}");
    }
}
