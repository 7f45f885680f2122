use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eigmap")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn temp_problem(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("eigmap-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn verify_intro() {
    let (code, v, _) = run(&["verify", problem("intro.toml").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["q"]["left_indices"], serde_json::json!([0, 2]));
    assert_eq!(v["p"]["finite"][1]["point"], "x");
    assert_eq!(v["p"]["finite"][1]["exponents"], serde_json::json!([1, 2]));
}

#[test]
fn preimage_of_twenty() {
    let (code, v, _) = run(&["preimage", problem("intro.toml").to_str().unwrap(), "--at", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["points"], serde_json::json!([{"point": "y - 5/2", "multiplicity": 2}]));
    let (_, v, _) = run(&["preimage", problem("quartic.toml").to_str().unwrap(), "--at", "1"]);
    let pts: Vec<(String, u64)> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["point"].as_str().unwrap().to_string(), p["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(pts, vec![("y - 1".into(), 2), ("y + 1".into(), 1), ("inf".into(), 1)]);
    let (code, _, _) = run(&["preimage", problem("quartic.toml").to_str().unwrap(), "--at", "-5/3"]);
    assert_eq!(code, 0);
}

#[test]
fn eig_on_zero_matrix() {
    let (code, v, _) = run(&["eig", problem("zero.toml").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["finite"], serde_json::json!([]));
    assert_eq!(v["infinite"], serde_json::json!([]));
    assert_eq!(v["right_indices"], serde_json::json!([0, 0]));
}

#[test]
fn other_commands() {
    let f = problem("kernel_f5.toml");
    let f = f.to_str().unwrap();
    let (code, v, _) = run(&["minbasis", f, "--side", "right"]);
    assert_eq!(code, 0);
    assert_eq!(v["indices"], serde_json::json!([2]));
    assert_eq!(v["forney"]["holds"], true);
    let (code, v, _) = run(&["minbasis", f, "--side", "left"]);
    assert_eq!(code, 0);
    assert_eq!(v["indices"], serde_json::json!([0]));
    let (code, v, _) = run(&["smith", f]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 3);
    let (code, v, _) = run(&["transform", f]);
    assert_eq!(code, 0);
    assert_eq!(v["grade"], 2);
    assert_eq!(v["matrix"][0][0], "y^2 + 1");
    let (code, v, _) = run(&["verify", f]);
    assert_eq!((code, &v["verdict"]), (0, &Value::Bool(true)));
    let (code, _, err) = run(&["minbasis", f, "--side", "right", "--cap", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("degree cap"));
}

#[test]
fn input_errors_exit_2() {
    let bad = temp_problem("bad.toml", "field = \"Q\"\nmatrix = [[\"x +* 1\"]]\n");
    let (code, _, err) = run(&["eig", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("position 3"), "{err}");
    let unsupported = temp_problem("field.toml", "field = \"Fp:9\"\nmatrix = [[\"x\"]]\n");
    assert_eq!(run(&["eig", unsupported.to_str().unwrap()]).0, 2);
    let no_map = problem("zero.toml");
    assert_eq!(run(&["verify", no_map.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["preimage", problem("intro.toml").to_str().unwrap(), "--at", "z"]).0, 2);
    assert_eq!(run(&["eig"]).0, 2);
}

#[test]
fn selftest_is_deterministic() {
    let args = ["selftest", "--cases", "12", "--seed", "11"];
    let (code, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(a["passed"], 12);
    assert_eq!(a, b);
}
