use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_indexforms"));
    c.env_remove("INDEXFORMS_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("indexforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn ahat_degree_four_coefficient() {
    let out = run(&["ahat", "--n", "2", "--degree", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let deg4 = r["results"]["ahat_roots"]["4"].as_array().unwrap();
    assert!(
        deg4.iter().any(|t| t[0] == "r1^2" && t[1] == "-1/24"),
        "{deg4:?}"
    );
    assert_eq!(r["summary"]["fail"], 0);
}

#[test]
fn fspecial_check_passes_ten() {
    let out = run(&["fspecial", "--check", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["pass"], 10);
    assert_eq!(r["summary"]["fail"], 0);
}

#[test]
fn missing_instance_is_a_schema_error() {
    let out = run(&["familyzeta", "--instance", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wrong_schema_version_or_kind_is_rejected() {
    let old = scratch(
        "old.json",
        r#"{"schema_version": 9, "kind": "getzler-geometry", "payload": {"n": 2}}"#,
    );
    assert_eq!(
        run(&["ahat", "--instance", old.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let kind = scratch(
        "kind.json",
        r#"{"schema_version": 1, "kind": "model-spectrum", "payload": {"n": 2}}"#,
    );
    assert_eq!(
        run(&["ahat", "--instance", kind.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let ok = scratch(
        "geom.json",
        r#"{"schema_version": 1, "kind": "getzler-geometry", "payload": {"n": 2, "truncation": 2}}"#,
    );
    assert_eq!(
        run(&["ahat", "--instance", ok.to_str().unwrap(), "--json"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn reports_are_deterministic() {
    let a = report(&run(&[
        "familyzeta",
        "--count",
        "4",
        "--seed",
        "7",
        "--json",
    ]));
    let b = report(&run(&[
        "familyzeta",
        "--count",
        "4",
        "--seed",
        "7",
        "--json",
    ]));
    assert_eq!(a["digest"], b["digest"]);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    assert_eq!(strip(a.clone()), strip(b));
    let c = report(&run(&[
        "familyzeta",
        "--count",
        "4",
        "--seed",
        "8",
        "--json",
    ]));
    assert_ne!(a["digest"], c["digest"]);
}

#[test]
fn failed_check_exits_one() {
    // λ_k = (k+1)^{1/2} on one side only: ζ(0) = −1/2 is no index
    let model = r#"{"families": [{"shift": "1", "power": "1/2", "scale": "1", "multiplicity": 1}], "kernel": [0, 0]}"#;
    let out = run(&["index", "--model", model, "--t", "1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_is_validated_and_applied() {
    let bad = scratch("bad.toml", "no_such_key = 1\n");
    let out = bin()
        .env("INDEXFORMS_CONFIG", &bad)
        .args(["fspecial", "--check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let good = scratch("good.toml", "seed = 11\ncount = 2\n");
    let out = bin()
        .env("INDEXFORMS_CONFIG", &good)
        .args(["chern", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["input"]["seed"], 11);
    assert_eq!(r["input"]["count"], 2);
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("indexforms-out-{}.json", std::process::id()));
    let out = run(&[
        "zeta-det",
        "--model",
        "s1-laplacian",
        "--out",
        path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let det = r["results"]["determinant"].as_f64().unwrap();
    assert!((det - (2.0 * std::f64::consts::PI).powi(2)).abs() < 1e-8);
}

#[test]
fn symbol_pipeline_checks() {
    let out = run(&[
        "symbols",
        "--n",
        "1",
        "--base",
        "2",
        "--perturbation",
        "dz1*x1 + dz2*x1^2",
        "--with",
        "x1*xi1^2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["summary"]["pass"], 3);
}
