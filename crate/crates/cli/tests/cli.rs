use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indexp"))
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn instance(name: &str) -> Value {
    let text = std::fs::read_to_string(corpus().join(format!("{name}.json"))).unwrap();
    let entry: Value = serde_json::from_str(&text).unwrap();
    entry["instance"].clone()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn run(args: &[&str], input: &Path) -> Output {
    bin().args(args).arg("-i").arg(input).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s3() -> Value {
    json!({"type": "perm", "degree": 3, "generators": [[2, 3, 1], [2, 1, 3]]})
}

#[test]
fn chartab_s3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s3.json", &s3());
    let v = stdout_json(&run(&["chartab"], &input));
    let text = v.to_string();
    assert!(text.contains("-1"), "{text}");
    let out_path = dir.path().join("table.json");
    let out = bin().args(["chartab", "-i"]).arg(&input).arg("-o").arg(&out_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"type\": \"perm\", \"degree\": 3,").unwrap();
    for cmd in ["chartab", "classify", "decompose"] {
        assert_eq!(run(&[cmd], &path).status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn order_cap_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let s4 = json!({"type": "perm", "degree": 4, "generators": [[2, 1, 3, 4], [2, 3, 4, 1]]});
    let input = write(dir.path(), "s4.json", &s4);
    let out = bin().env("INDEXP_MAX_ORDER", "10").args(["chartab", "-i"]).arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn non_prime_index_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = json!({
        "group": {"type": "perm", "degree": 4, "generators": [[2, 1, 3, 4], [2, 3, 4, 1]]},
        "subgroup": [[2, 1, 4, 3], [3, 4, 1, 2]],
        "field": 1,
        "eta": {"index": 0}
    });
    let input = write(dir.path(), "s4_v4.json", &inst);
    assert_eq!(run(&["classify"], &input).status.code(), Some(2));
}

#[test]
fn eta_fingerprint_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst = instance("04_c4_c2_q");
    inst["eta"]["fingerprint"] = json!(["1", "1"]);
    let input = write(dir.path(), "c4.json", &inst);
    assert_eq!(run(&["classify"], &input).status.code(), Some(2));
}

#[test]
fn classify_d4_and_q8() {
    let dir = tempfile::tempdir().unwrap();
    let d4 = stdout_json(&run(&["classify"], &write(dir.path(), "d4.json", &instance("06_d4_r_q"))));
    assert_eq!(d4["case"], 4);
    assert_eq!(d4["lambda"], json!({"conductor": 1, "coeffs": ["4"]}));
    assert_eq!(d4["mu"], json!({"conductor": 1, "coeffs": ["2"]}));
    assert_eq!(d4["actual_count"], 2);
    assert_eq!(d4["match"], true);

    let q8 = stdout_json(&run(&["classify"], &write(dir.path(), "q8.json", &instance("03_q8_i_q"))));
    assert_eq!(q8["case"], 2);
    assert_eq!(q8["actual_count"], 1);
    assert_eq!(q8["total_degree"], q8["expected_degree"]);
}

#[test]
fn decompose_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("02_s3_a3_q", vec![(vec![2], 2)]),
        ("04_c4_c2_q", vec![(vec![1, 3], 1)]),
        ("06_d4_r_q", vec![(vec![2], 1), (vec![3], 1)]),
    ];
    for (name, want) in cases {
        let v = stdout_json(&run(&["decompose"], &write(dir.path(), &format!("{name}.json"), &instance(name))));
        let got: Vec<(Vec<u64>, u64)> = v["constituents"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let orbit = c["orbit"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
                (orbit, c["complex_multiplicity"].as_u64().unwrap())
            })
            .collect();
        assert_eq!(got, want, "{name}");
        assert_eq!(v["degree_ok"], true);
    }
}

#[test]
fn verify_corpus_passes() {
    let out = bin().args(["verify", "--corpus"]).arg(corpus()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["sweep"]["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn verify_catches_a_wrong_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus().join("06_d4_r_q.json")).unwrap();
    let mut entry: Value = serde_json::from_str(&text).unwrap();
    entry["expected"]["lambda"] = json!({"conductor": 1, "coeffs": ["-4"]});
    write(dir.path(), "06_d4_r_q.json", &entry);
    let report = dir.path().join("report.json");
    let out = bin().args(["verify", "--corpus"]).arg(dir.path()).arg("--report").arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let failures = v["entries"][0]["expectation_failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f.as_str().unwrap().starts_with("lambda")), "{failures:?}");
}

#[test]
fn counterexamples_fail_verification() {
    let out = bin().args(["verify", "--corpus"]).arg(corpus().join("counterexamples")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for e in v["entries"].as_array().unwrap() {
        // the expectations hold; only the prediction is off
        assert!(e["expectation_failures"].as_array().unwrap().is_empty(), "{}", e["name"]);
        assert_eq!(e["outcome"]["match"], false, "{}", e["name"]);
    }
}

#[test]
fn output_is_deterministic() {
    let a = bin().args(["verify", "--jobs", "1", "--corpus"]).arg(corpus()).output().unwrap();
    let b = bin().args(["verify", "--jobs", "4", "--corpus"]).arg(corpus()).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c9.json", &instance("05_c9_c3_q"));
    let c = run(&["classify"], &input);
    let d = run(&["classify"], &input);
    assert_eq!(c.stdout, d.stdout);
}
