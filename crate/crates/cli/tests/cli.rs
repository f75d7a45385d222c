use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(args)
        .env_remove("QES_CONFIG")
        .output()
        .expect("binary runs")
}

fn manifest(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn sextic_roots_at_the_second_level() {
    let out = qes(&["poly", "--family", "sextic", "--j", "2", "--l", "0", "--emit", "roots"]);
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&out);
    let approx: Vec<f64> = serde_json::from_value(m["results"]["approx"].clone()).unwrap();
    let r = 2.0 * 6f64.sqrt();
    assert_eq!(approx.len(), 2);
    assert!((approx[0] + r).abs() < 1e-12 && (approx[1] - r).abs() < 1e-12);
    assert_eq!(m["parameters"]["l"], "0");
    assert_eq!(m["settings"]["precision_bits"], 128);
}

#[test]
fn general_order_three_reproduces_cheng_byte_for_byte() {
    let g = "1/4,1,7/4";
    let a = qes(&["poly", "--family", "cheng", "--g", g, "--n", "6"]);
    let b = qes(&["poly", "--family", "general", "--order", "3", "--power", "1", "--g", g, "--n", "6"]);
    let (a, b) = (manifest(&a), manifest(&b));
    assert_eq!(
        serde_json::to_string(&a["results"]["coeffs"]).unwrap(),
        serde_json::to_string(&b["results"]["coeffs"]).unwrap()
    );
}

#[test]
fn cheng_coefficients_are_exact_rationals() {
    let m = manifest(&qes(&["poly", "--family", "cheng", "--g", "3/2,-3/2,3", "--n", "2"]));
    for c in m["results"]["coeffs"].as_array().unwrap() {
        assert!(c.is_string());
    }
}

#[test]
fn decimals_and_bad_combinations_exit_with_usage_errors() {
    let out = qes(&["poly", "--family", "sextic", "--alpha", "0.5", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parse");
    let out = qes(&["poly", "--family", "sextic", "--alpha", "1", "--j", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qes(&["biorthogonality", "--g", "1,1/4,7/4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_spectrum_is_a_valid_manifest() {
    let out = qes(&["spectrum", "--problem", "sextic", "--alpha", "0", "--k-max", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(manifest(&out)["results"]["eigenvalues"].as_array().unwrap().len(), 0);
}

#[test]
fn sextic_spectrum_contains_the_qes_pair() {
    let m = manifest(&qes(&["spectrum", "--problem", "sextic", "--alpha", "-9", "--l", "0", "--k-max", "3"]));
    let values: Vec<f64> = m["results"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .collect();
    let r = 2.0 * 6f64.sqrt();
    assert!(values.iter().any(|v| (v - r).abs() < 1e-8));
    assert!(values.iter().any(|v| (v + r).abs() < 1e-8));
}

#[test]
fn third_order_resonance_roots() {
    let out = qes(&["resonance", "--family", "third", "--j", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&out);
    let roots: Vec<f64> = m["results"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["approx"].as_f64().unwrap())
        .collect();
    let r = 3.0 * 4.5f64.sqrt();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] + r).abs() < 1e-12 && (roots[1] - r).abs() < 1e-12);
    assert!(m["results"]["roots"][0]["channel"] == "qes");
}

#[test]
fn tsv_samples_go_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.tsv");
    let out = qes(&[
        "closedform", "--kind", "whittaker", "--grid", "0.5:2:4", "--emit", "tsv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x\tvalue");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0.5\t"));
    assert!(manifest(&out)["certified"].as_bool().unwrap());
    // TSV without a file is a usage error
    let out = qes(&["closedform", "--kind", "whittaker", "--grid", "1:2:2", "--emit", "tsv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_certification_exits_with_one() {
    let out = qes(&["isospec", "--alpha", "0", "--l", "0", "--k-max", "1", "--pair-tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&out);
    assert_eq!(m["certified"], false);
}

#[test]
fn configuration_file_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("qes.conf");
    std::fs::write(&cfg, "precision_bits = 96\ntol = 1e-9\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["poly", "--family", "sextic", "--j", "1"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_qes"))
            .args(&args)
            .env("QES_CONFIG", &cfg)
            .output()
            .unwrap()
    };
    let m = manifest(&run(&[]));
    assert_eq!(m["settings"]["precision_bits"], 96);
    assert_eq!(m["settings"]["tol"], 1e-9);
    let m = manifest(&run(&["--tol", "1e-12"]));
    assert_eq!(m["settings"]["tol"], 1e-12);
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&[]).status.code(), Some(2));
}

fn replay(path: &Path) -> Output {
    qes(&["replay", path.to_str().unwrap()])
}

#[test]
fn manifests_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = qes(&[
        "spectrum", "--problem", "third", "--j", "1", "--k-max", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(replay(&path).status.code(), Some(0));
    // a tampered eigenvalue is detected
    let mut m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    m["results"]["eigenvalues"][1]["value"] = Value::from(12.5);
    std::fs::write(&path, serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(replay(&path).status.code(), Some(3));
}
