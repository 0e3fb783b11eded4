//! Black-box tests of the `cpg` binary: exit codes, JSON shapes, and the
//! reproducibility contract.

use std::path::Path;
use std::process::{Command, Output};

fn cpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn unknown_subcommand_exits_one() {
    let out = cpg(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn constants_prints_the_radius_digits() {
    let out = cpg(&["constants", "--digits", "30"]);
    let v = stdout_json(&out);
    let rho = v["rho"].as_str().unwrap();
    assert!(rho.starts_with("0.31922460619545270076142906828"));
}

#[test]
fn coeffs_prints_exact_network_coefficients() {
    let out = cpg(&["coeffs", "--n", "10", "--class", "d"]);
    let v = stdout_json(&out);
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs[4].as_str().unwrap(), "1/2");
    assert_eq!(coeffs[6].as_str().unwrap(), "9/4");
    assert_eq!(coeffs[8].as_str().unwrap(), "45/4");
}

#[test]
fn enumerate_reports_sixty_graphs_at_six() {
    let out = cpg(&["enumerate", "--n", "6"]);
    let v = stdout_json(&out);
    assert_eq!(v["count"].as_u64(), Some(60));
}

#[test]
fn exact_size_guard_rejects_large_n_without_force() {
    let out = cpg(&["sample", "--model", "c", "--n", "1000", "--window", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));
}

#[test]
fn sampling_writes_graphs_and_a_manifest() {
    let dir = std::env::temp_dir().join(format!("cpg_cli_test_{}", std::process::id()));
    let out = cpg(&[
        "--seed", "7", "--out", dir.to_str().unwrap(),
        "sample", "--model", "c", "--n", "8", "--count", "3",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for i in 0..3 {
        assert!(Path::new(&dir.join(format!("sample_{i:05}.json"))).exists());
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"].as_u64(), Some(7));
    assert!(manifest["constants"]["rho"].as_f64().unwrap() > 0.31);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_seeds_reproduce_identical_samples() {
    let base = std::env::temp_dir().join(format!("cpg_cli_repro_{}", std::process::id()));
    let run = |tag: &str| {
        let dir = base.join(tag);
        let out = cpg(&[
            "--seed", "11", "--out", dir.to_str().unwrap(),
            "sample", "--model", "tri", "--n", "20", "--count", "2",
        ]);
        assert!(out.status.success());
        std::fs::read_to_string(dir.join("sample_00001.json")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
    std::fs::remove_dir_all(&base).ok();
}

#[test]
fn airy_csv_has_a_header() {
    let out = cpg(&["--format", "csv", "airy", "--min", "-1", "--max", "1", "--step", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("t,density"));
    assert_eq!(text.lines().count(), 6);
}
