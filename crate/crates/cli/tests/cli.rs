//! End-to-end tests of the `zeropair` binary: exit codes, determinism,
//! and output formats.

use std::process::{Command, Output};

fn zeropair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeropair"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn verify_combinatorics_passes_and_reports_each_lemma() {
    let out = zeropair(&["verify-combinatorics", "--max-n", "6", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for check in [
        "expected-pairs",
        "hypergeometric-law",
        "symmetrization-uniformity",
        "factorization-count",
        "zero-pair-existence",
        "kl-lower-bound",
        "nonuniform-moments",
        "d1-d2-equality",
    ] {
        assert!(stdout.contains(check), "missing check record for {check}");
    }
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], serde_json::Value::Bool(true));
    }
}

#[test]
fn identical_configs_give_byte_identical_output() {
    let args = [
        "attack", "--mode", "dszs", "--n", "3", "--kappa", "1", "--t-range", "0..3", "--trials",
        "40", "--seed", "11",
    ];
    let a = zeropair(&args);
    let b = zeropair(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    // A different seed changes the records.
    let c = zeropair(&[
        "attack", "--mode", "dszs", "--n", "3", "--kappa", "1", "--t-range", "0..3", "--trials",
        "40", "--seed", "12",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn analytic_sweep_matches_closed_form() {
    let out = zeropair(&[
        "attack", "--mode", "dszs", "--n", "3", "--kappa", "1", "--t-range", "0..5", "--trials",
        "0", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let t = v["iterations"].as_u64().unwrap();
        let theta = (1.0f64 / 8.0).sqrt().asin();
        let expected = ((2.0 * t as f64 + 1.0) * theta).sin().powi(2);
        let success = v["empirical"].as_f64().unwrap();
        assert!(
            (success - expected).abs() < 1e-9,
            "T={t}: {success} vs {expected}"
        );
        assert_eq!(v["total_queries"].as_u64().unwrap(), 2 * t + 1);
    }
}

#[test]
fn configuration_errors_exit_2() {
    let out = zeropair(&["attack", "--mode", "dszs", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("--n"), "stderr was: {stderr}");

    let out = zeropair(&["bounds", "--kind", "no-such-bound"]);
    assert_eq!(out.status.code(), Some(2));

    let out = zeropair(&["bounds", "--kind", "dszs-uniform"]);
    // missing n parameter
    assert_eq!(out.status.code(), Some(2));

    let out = zeropair(&["attack", "--mode", "dszs", "--n", "3", "--t-range", "5..1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_table_quotes_formula_values() {
    let out = zeropair(&["bounds", "--kind", "dszs-uniform", "--t", "3", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), 0.78125);
    assert_eq!(v["vacuous"], serde_json::Value::Bool(false));

    let out = zeropair(&[
        "bounds", "--kind", "all", "--t", "1", "--n", "4", "--r", "2", "--c", "2", "--kappa",
        "1", "--k", "1", "--big-n", "16", "--epsilon", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 7);
}

#[test]
fn csv_projection_has_header_and_rows() {
    let out = zeropair(&[
        "bounds",
        "--kind",
        "dszs-uniform",
        "--t-range",
        "0..3",
        "--n",
        "8",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("kind,params.t,"));
    assert!(lines[1].contains("dszs-uniform"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.jsonl");
    let out = zeropair(&[
        "existence",
        "--max-n",
        "64",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert_eq!(content.lines().count(), 3);
    let first: serde_json::Value = serde_json::from_str(content.lines().next().unwrap()).unwrap();
    assert_eq!(first["prob_num"], "5");
    assert_eq!(first["prob_den"], "6");
}

#[test]
fn sponge_digest_is_deterministic_given_seed() {
    let args = ["sponge", "--r", "2", "--c", "2", "--message", "1,0,3", "--blocks", "2", "--seed", "5"];
    let a = zeropair(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = zeropair(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(a.stdout).unwrap().trim()).unwrap();
    assert_eq!(v["digest"].as_array().unwrap().len(), 2);
}

#[test]
fn law_mode_emits_exact_rational_records() {
    let out = zeropair(&["sample", "--mode", "law", "--r", "2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<serde_json::Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3); // kappa = 0, 1, 2
    assert_eq!(rows[0]["kappa"], 0);
    assert!(rows[0]["prob_num"].is_string() && rows[0]["prob_den"].is_string());
    // law sums to one
    let total: f64 = rows.iter().map(|r| r["prob"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn distinguish_emits_verdict() {
    let out = zeropair(&[
        "distinguish", "--n", "3", "--kappa", "1", "--t", "1", "--trials", "100", "--seed", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(v["theorem"], "decision-advantage-ceiling");
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert!(v["bound"].as_f64().unwrap() > 0.0);
}
