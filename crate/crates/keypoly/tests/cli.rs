//! End-to-end checks of the keypoly binary: JSON-only stdout, documented
//! exit codes, and the worked examples.

use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_keypoly"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("keypoly-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{}-{name}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

const MU2: &str = r#"{"p": 2, "gamma0": "1/2",
    "steps": [{"phi": "x^2 + 2", "gamma": "3/2", "trusted": false}]}"#;

#[test]
fn eval_worked_example() {
    let chain = write_temp("mu2.json", MU2);
    let out = run(&["eval", "--chain", chain.to_str().unwrap(), "--poly", "x^3"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["value"], "3/2");
}

#[test]
fn epsilon_inline_gauss() {
    let out = run(&["epsilon", "--p", "2", "--gauss", "1", "--poly", "x^2+2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["value"], "1/2");
}

#[test]
fn compare_chains() {
    let a = write_temp("a.json", r#"{"p": 2, "gamma0": "0", "steps": []}"#);
    let b = write_temp("b.json", MU2);
    let out = run(&[
        "compare",
        "--chain",
        a.to_str().unwrap(),
        "--chain2",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["leq"], true);
    let out = run(&[
        "compare",
        "--chain",
        b.to_str().unwrap(),
        "--chain2",
        a.to_str().unwrap(),
    ]);
    assert_eq!(stdout_json(&out)["leq"], false);
}

#[test]
fn delta_classify_ball_sequence() {
    let chain = write_temp("mu2-b.json", MU2);
    let c = chain.to_str().unwrap();
    assert_eq!(stdout_json(&run(&["delta", "--chain", c]))["value"], "3/4");
    assert_eq!(
        stdout_json(&run(&["classify", "--chain", c]))["class"],
        "residue-transcendental"
    );
    let ball = stdout_json(&run(&["ball", "--chain", c]));
    assert_eq!(ball["radius"], "3/4");
    assert_eq!(ball["center_poly"], "x^2 + 2");
    assert_eq!(ball["degree"], 2);
    let seq = stdout_json(&run(&["optimal-seq", "--chain", c]));
    let entries = seq["sequence"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["poly"], "x");
    assert_eq!(entries[0]["eps"], "1/2");
    assert_eq!(entries[1]["eps"], "3/4");
}

#[test]
fn augment_truncate_iskey() {
    let gauss = write_temp("g.json", r#"{"p": 2, "gamma0": "1/2", "steps": []}"#);
    let g = gauss.to_str().unwrap();
    let out = run(&[
        "augment", "--chain", g, "--poly", "x^2 + 2", "--gamma", "3/2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let chain_doc = stdout_json(&out);
    assert_eq!(chain_doc["steps"][0]["phi"], "x^2 + 2");
    let augmented = write_temp("aug.json", &chain_doc.to_string());

    let out = run(&[
        "truncate",
        "--chain",
        augmented.to_str().unwrap(),
        "--key",
        "x^2 + 2",
        "--poly",
        "x^3",
    ]);
    assert_eq!(stdout_json(&out)["value"], "3/2");

    let out = run(&[
        "is-akp",
        "--chain",
        augmented.to_str().unwrap(),
        "--poly",
        "x^2 + 2",
    ]);
    assert_eq!(stdout_json(&out)["akp"], true);

    let out = run(&["is-key", "--chain", g, "--poly", "x^2 + 2", "--height", "8"]);
    assert_eq!(stdout_json(&out)["result"], "yes");
    let zero = write_temp("g0.json", r#"{"p": 2, "gamma0": "0", "steps": []}"#);
    let out = run(&[
        "is-key",
        "--chain",
        zero.to_str().unwrap(),
        "--poly",
        "x^2 + 2",
    ]);
    assert_eq!(stdout_json(&out)["result"], "no");
}

#[test]
fn mlv_normalize_and_verify() {
    let raw = write_temp(
        "raw.json",
        r#"{"p": 2, "gamma0": "0", "steps": [
            {"phi": "x", "gamma": "1/2"},
            {"phi": "x^2 + 2", "gamma": "3/2"}]}"#,
    );
    let out = run(&["mlv-normalize", "--chain", raw.to_str().unwrap()]);
    assert!(out.status.success());
    let mlv_doc = stdout_json(&out);
    assert_eq!(mlv_doc["steps"].as_array().unwrap().len(), 2);
    let mlv = write_temp("mlv.json", &mlv_doc.to_string());
    let out = run(&[
        "mlv-verify",
        "--mlv",
        mlv.to_str().unwrap(),
        "--chain",
        raw.to_str().unwrap(),
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["mlv1"], true);
    assert_eq!(report["mlv2"], true);
    assert_eq!(report["mlv3"], true);
    assert_eq!(report["degrees"], serde_json::json!([1, 2]));
}

const SUM2K: &str = r#"{"kind": "monomial_centers", "p": 2,
    "centers": "sum_2^k", "deltas": "k_plus_1", "cap": 16}"#;

#[test]
fn limit_commands() {
    let fam = write_temp("fam.json", SUM2K);
    let f = fam.to_str().unwrap();
    let out = run(&["limit-eval", "--family", f, "--poly", "x - 1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "1");
    assert_eq!(doc["witness_index"], 1);
    assert_eq!(doc["certified"], true);

    // uncertified scan exits 3 under --strict
    let out = run(&["limit-eval", "--family", f, "--poly", "x + 1", "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["certified"], false);

    let out = run(&[
        "limit-kp",
        "--family",
        f,
        "--max-degree",
        "2",
        "--height",
        "4",
        "--scan",
        "12",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["degree"], 1);
    assert_eq!(doc["polys"], serde_json::json!(["x + 1"]));
}

#[test]
fn validation_errors_exit_2() {
    // malformed polynomial
    let out = run(&["epsilon", "--p", "2", "--gauss", "0", "--poly", "x^^2"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["error"]["kind"], "parse");
    // composite p
    let out = run(&["eval", "--p", "6", "--gauss", "0", "--poly", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "not_prime");
    // bad augmentation
    let g = write_temp("gh.json", r#"{"p": 2, "gamma0": "1/2", "steps": []}"#);
    let out = run(&[
        "augment",
        "--chain",
        g.to_str().unwrap(),
        "--poly",
        "x^2 + 2",
        "--gamma",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "not_augmentation");
    // missing chain source
    let out = run(&["delta"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_float_free_and_prime_check_flag() {
    let chain = write_temp("mu2-c.json", MU2);
    let out = run(&["delta", "--chain", chain.to_str().unwrap(), "--prime-check"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text
        .as_bytes()
        .windows(3)
        .any(|w| w[0].is_ascii_digit() && w[1] == b'.' && w[2].is_ascii_digit()));
    let doc: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(doc["p_prime"], true);
}

#[test]
fn selftest_smoke() {
    let out = run(&["selftest", "--seed", "7", "--samples", "40"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], true);
    let suites = doc["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 4);
    for s in suites {
        assert!(s["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn chain_round_trip_through_cli() {
    // serialize -> parse -> equivalent, driven through the binary
    let chain = write_temp("mu2-d.json", MU2);
    let out = run(&[
        "augment",
        "--chain",
        chain.to_str().unwrap(),
        "--poly",
        "x^2 + 2",
        "--gamma",
        "2",
    ]);
    assert!(out.status.success());
    let deeper = write_temp("deeper.json", &stdout_json(&out).to_string());
    let out = run(&[
        "compare",
        "--chain",
        chain.to_str().unwrap(),
        "--chain2",
        deeper.to_str().unwrap(),
    ]);
    assert_eq!(stdout_json(&out)["leq"], true);
    let out = run(&[
        "eval",
        "--chain",
        deeper.to_str().unwrap(),
        "--poly",
        "x^2 + 2",
    ]);
    assert_eq!(stdout_json(&out)["value"], "2");
}
