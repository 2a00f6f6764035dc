use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bign")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn keygen_encrypt_decrypt_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let keys = dir.path().join("keys");
    let ct = dir.path().join("ct.json");
    assert!(bign(&["keygen", "--params", "6,4,40", "--seed", "11", "--out", path(&keys)]).status.success());
    let pk = keys.join("public_key.json");
    let sk = keys.join("secret_key.json");

    let enc = bign(&["encrypt", "--pk", path(&pk), "--plaintext", "0,7,19,39", "--out", path(&ct)]);
    assert!(enc.status.success());
    let dec = stdout_json(&bign(&["decrypt", "--sk", path(&sk), "--ciphertext", path(&ct)]));
    assert_eq!(dec["plaintext"], serde_json::json!([0, 7, 19, 39]));

    for seed in ["1", "2", "3"] {
        assert!(bign(&["encrypt", "--pk", path(&pk), "--seed", seed, "--out", path(&ct)]).status.success());
        let file: Value = serde_json::from_str(&std::fs::read_to_string(&ct).unwrap()).unwrap();
        let dec = stdout_json(&bign(&["decrypt", "--sk", path(&sk), "--ciphertext", path(&ct)]));
        assert_eq!(dec["plaintext"], file["plaintext"]);
    }
}

#[test]
fn wrong_weight_plaintext_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bign(&["keygen", "--params", "4,2,12", "--out", path(dir.path())]).status.success());
    let out = bign(&["encrypt", "--pk", path(&dir.path().join("public_key.json")), "--plaintext", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "WeightViolation");
}

#[test]
fn oversized_length_exits_with_parameter_violation() {
    let out = bign(&["keygen", "--params", "4,2,17"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ParameterViolation");

    let out = bign(&["stats", "--level", "mid1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn same_seed_same_keys() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    for (d, seed) in [(&a, "9"), (&b, "9"), (&c, "10")] {
        assert!(bign(&["keygen", "--params", "5,3,28", "--seed", seed, "--out", path(d)]).status.success());
    }
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read(&a, "secret_key.json"), read(&b, "secret_key.json"));
    assert_eq!(read(&a, "public_key.json"), read(&b, "public_key.json"));
    assert_ne!(read(&a, "public_key.json"), read(&c, "public_key.json"));
}

#[test]
fn inject_prints_one_line_per_injection() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bign(&["keygen", "--params", "6,4,40", "--out", path(dir.path())]).status.success());
    let sk = dir.path().join("secret_key.json");
    let out = bign(&["inject", "--sk", path(&sk), "--p", "3,5", "--d", "0", "--count", "5"]);
    assert!(out.status.success());
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    for l in &lines {
        assert_eq!(l["p"], serde_json::json!([3, 5]));
        assert_eq!(l["d"], 0);
    }

    let out = bign(&["inject", "--sk", path(&sk), "--p", "3,5", "--d", "0", "--countermeasures", "weight"]);
    let l: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(l["rejected"], true);
}

#[test]
fn attack_passes_and_alt_pair_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let keys = dir.path().join("keys");
    let alt = dir.path().join("alt.json");
    assert!(bign(&["keygen", "--params", "8,20,256", "--seed", "4", "--out", path(&keys)]).status.success());
    let sk = keys.join("secret_key.json");
    let report = stdout_json(&bign(&["attack", "--sk", path(&sk), "--seed", "4", "--alt-out", path(&alt)]));
    assert_eq!(report["verdict"], "PASS");
    assert_eq!(report["report"]["verified"], 100);

    let measured = report["injections"].as_f64().unwrap();
    let expected = report["estimate"]["expected_injections"].as_f64().unwrap();
    assert!((measured - expected).abs() <= 0.2 * expected, "measured {measured}, expected {expected}");

    let pk = keys.join("public_key.json");
    let v = stdout_json(&bign(&["verify", "--pk", path(&pk), "--alt", path(&alt), "--seed", "77"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["verified"], 100);
}

#[test]
fn countermeasures_defeat_the_attack() {
    let out = bign(&[
        "attack",
        "--params",
        "6,4,40",
        "--countermeasures",
        "weight,reencrypt",
        "--budget",
        "300",
        "--words",
        "0",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "DEFEATED");
    assert_eq!(report["error"]["kind"], "BudgetExceeded");
    assert_eq!(report["injections"], 300);
}

#[test]
fn stats_reports_probabilities() {
    let r = stdout_json(&bign(&["stats", "--params", "6,4,64", "--codes", "2", "--words", "30"]));
    assert_eq!(r["constant"]["avg"], 31.0);
    assert_eq!(r["quadratic"]["avg"], 31.0);
    assert_eq!(r["per_code"].as_array().unwrap().len(), 2);
}
