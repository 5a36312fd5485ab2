use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn chessdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chessdeg")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = chessdeg(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (value, out.status.code().unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float in output: {n}"),
        Value::Array(a) => a.iter().for_each(assert_no_floats),
        Value::Object(m) => m.values().for_each(assert_no_floats),
        _ => {}
    }
}

#[test]
fn xi_3_2_degree() {
    let (v, code) = report(&["degree", "--xi", "3", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], json!(2));
    assert_eq!(v["mod"], json!([3, 2]));
    assert!(v["manifest"]["version"].is_string());
}

#[test]
fn xi_degrees_agree_across_methods() {
    for (r, magnitude) in [(2, 1), (3, 2), (4, 6), (5, 24)] {
        let (v, code) = report(&["degree", "--xi", &r.to_string(), &(r - 1).to_string(), "--method", "both"]);
        assert_eq!(code, 0);
        assert_eq!(v["homological"], v["preimage"]);
        assert_eq!(v["degree"].as_i64().unwrap().abs(), magnitude);
    }
    let (v, _) = report(&["degree", "--xi", "3", "2", "--power", "2"]);
    assert_eq!(v["degree"], json!(4));
    assert_eq!(v["mod"], json!([3, 1]));
}

#[test]
fn torus_homology() {
    let (v, code) = report(&["homology", "--chessboard", "4", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["betti"], json!([0, 2, 1]));
    assert_eq!(v["reduced"], json!(true));
    let (v, _) = report(&["homology", "--chessboard", "4", "3", "--unreduced"]);
    assert_eq!(v["betti"], json!([1, 2, 1]));
}

#[test]
fn colored_radon_thousand_trials() {
    let (v, code) = report(&["scenario", "colored-radon", "--d", "2", "--trials", "1000", "--seed", "7", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], json!(1000));
    assert_eq!(v["reports"].as_array().unwrap().len(), 1000);
    assert_no_floats(&v);
}

#[test]
fn deterministic_output_ignores_thread_count() {
    let args = |t: &'static str| ["scenario", "k333", "--trials", "8", "--seed", "3", "--deterministic", "--threads", t];
    let one = chessdeg(&args("1"));
    let four = chessdeg(&args("4"));
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn complex_files_round_trip() {
    let (board, code) = report(&["complex", "chessboard", "--m", "3", "--n", "2"]);
    assert_eq!(code, 0);
    let a = scratch("d32.json");
    std::fs::write(&a, board.to_string()).unwrap();
    let (skeleton, _) = report(&["complex", "skeleton", "--m", "3", "--k", "2"]);
    let b = scratch("s32.json");
    std::fs::write(&b, skeleton.to_string()).unwrap();

    let (h, _) = report(&["homology", "--complex", a.to_str().unwrap()]);
    assert_eq!(h["betti"], json!([0, 1]));

    let (joined, code) = report(&["complex", "join", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let c = scratch("join.json");
    std::fs::write(&c, joined.to_string()).unwrap();
    let (h, _) = report(&["homology", "--complex", c.to_str().unwrap()]);
    assert_eq!(h["betti"], json!([0, 0, 0, 1]));

    let map = scratch("xi.json");
    std::fs::write(&map, r#"{"vertex_map":[0,0,1,1,2,2]}"#).unwrap();
    let (d, code) = report(&[
        "degree", "--map", map.to_str().unwrap(), "--dom", a.to_str().unwrap(), "--cod", b.to_str().unwrap(),
        "--method", "both", "--mod", "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(d["degree"], json!(2));
    assert_eq!(d["mod"], json!([3, 2]));
}

#[test]
fn pseudomanifold_and_orientation() {
    let (v, code) = report(&["pseudo", "--chessboard", "4", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["orientable"], json!(true));
    let (v, _) = report(&["orient", "--chessboard", "3", "2"]);
    let chain = v["chain"].as_array().unwrap();
    assert_eq!(chain.len(), 6);
    assert!(chain.iter().all(|t| t["coefficient"].as_i64().unwrap().abs() == 1));
}

#[test]
fn equivariant_maps_and_congruence() {
    let (v, code) = report(&["equimaps", "--dom-chessboard", "3", "2", "--cod-skeleton", "3", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], json!(9));
    assert!(v["maps"].as_array().unwrap().contains(&json!([0, 0, 1, 1, 2, 2])));

    let (v, code) = report(&["audit-congruence", "--dom-chessboard", "3", "2", "--cod-skeleton", "3", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["residues"], json!([2, 2, 2, 2, 2, 2, 2, 2, 2]));

    let out = chessdeg(&["equimaps", "--dom-chessboard", "3", "5", "--cod-skeleton", "3", "3", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn random_config_feeds_scenario() {
    let (cfg, code) = report(&["random-config", "--d", "2", "--sizes", "3,1,1", "--seed", "5"]);
    assert_eq!(code, 0);
    let path = scratch("radon.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let (v, code) = report(&["scenario", "colored-radon", "--d", "2", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], json!(true));
    assert_eq!(v["partition"].as_array().unwrap().len(), 2);
    assert_no_floats(&v);

    let out = chessdeg(&["scenario", "k33", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("out.json");
    let out = chessdeg(&["homology", "--skeleton", "4", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["betti"], json!([0, 0, 1]));
}

#[test]
fn stochastic_never_refutes() {
    let out = chessdeg(&["scenario", "k4444", "--stochastic", "--budget", "1", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["found"], Value::Null);
    let (v, code) = report(&["scenario", "k555", "--stochastic", "--seed", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], json!(true));
}

#[test]
fn input_errors_exit_3() {
    for args in [
        vec!["frobnicate"],
        vec!["degree", "--xi", "3"],
        vec!["scenario", "tverberg"],
        vec!["scenario", "k1", "--d", "2"],
        vec!["scenario", "k1", "--r", "4", "--d", "2"],
        vec!["scenario", "mixed-a", "--r", "3", "--d", "2", "--l", "0", "--k", "1"],
        vec!["scenario", "k33", "--exhaustive", "--stochastic"],
        vec!["homology"],
        vec!["homology", "--complex", "/nonexistent/complex.json"],
        vec!["degree", "--xi", "3", "2", "--method", "guess"],
    ] {
        let out = chessdeg(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(chessdeg(&["--help"]).status.code(), Some(0));
    let help = String::from_utf8(chessdeg(&["scenario", "--help"]).stdout).unwrap();
    for name in ["colored-radon", "k1", "mixed-a", "mixed-b", "k33", "k333", "k555", "k4444", "classic-tverberg"] {
        assert!(help.contains(name), "{name} missing from help");
    }
}

#[test]
fn malformed_config_exit_3() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"dim":2,"points":[{"x":["1/0","2"],"color":0}]}"#).unwrap();
    let out = chessdeg(&["scenario", "colored-radon", "--d", "2", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
