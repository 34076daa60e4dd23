use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use coset_spectra::codes::{bch_code, extended_dual_bch_code};
use coset_spectra::spectra::{weight_distribution, WeightDistribution};
use coset_spectra::DEFAULT_ENUMERATION_BUDGET;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coset-spectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("report is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["spectrum", "--family", "simplex", "--r", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_family_parameter_is_a_usage_error() {
    let out = run(&["construct", "--family", "bch", "--r", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--t"));
}

#[test]
fn simplex_spectrum_csv() {
    let out = run(&["spectrum", "--family", "simplex", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let spectrum = WeightDistribution::from_csv(&stdout(&out)).unwrap();
    let counts = spectrum.counts_u64().unwrap();
    assert_eq!(counts, vec![1, 0, 0, 0, 7, 0, 0, 0]);
}

#[test]
fn construct_then_spectrum_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let code_path = dir.path().join("bch.txt");
    let spec_path = dir.path().join("bch.csv");
    let out = run(&[
        "construct",
        "--family",
        "bch",
        "--t",
        "2",
        "--r",
        "5",
        "--out",
        path_str(&code_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "spectrum",
        "--input",
        path_str(&code_path),
        "--out",
        path_str(&spec_path),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let from_file =
        WeightDistribution::from_csv(&std::fs::read_to_string(&spec_path).unwrap()).unwrap();
    let direct =
        weight_distribution(&bch_code(2, 5).unwrap(), None, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(from_file, direct);
    let via_family = run(&["spectrum", "--family", "bch", "--t", "2", "--r", "5"]);
    assert_eq!(
        WeightDistribution::from_csv(&stdout(&via_family)).unwrap(),
        direct
    );
}

#[test]
fn dual_spectrum_matches_the_dual_code() {
    let out = run(&[
        "spectrum",
        "--family",
        "ext-dual-bch",
        "--t",
        "2",
        "--r",
        "4",
        "--dual",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dual = extended_dual_bch_code(2, 4).unwrap().dual();
    let direct = weight_distribution(&dual, None, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(WeightDistribution::from_csv(&stdout(&out)).unwrap(), direct);
}

#[test]
fn verify_bounds_on_extended_hadamard() {
    let out = run(&[
        "verify-bounds",
        "--family",
        "ext-hadamard",
        "--r",
        "4",
        "--grid",
        "201",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&out);
    assert_eq!(report["config"]["subcommand"], "verify-bounds");
    assert_eq!(report["config"]["grid"], 201);
    let records = report["report"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 2 * 201);
    for record in records {
        for key in [
            "case",
            "feasible",
            "worstSlack",
            "eBinH",
            "boundA",
            "boundB",
            "lpValue",
        ] {
            assert!(record.get(key).is_some(), "missing {key}");
        }
        assert_eq!(record["feasible"], true);
        assert!(record["worstSlack"].as_f64().unwrap() >= -1e-9);
    }
    assert_eq!(report["report"]["violations"], 0);
}

#[test]
fn verify_bounds_without_a_code() {
    let out = run(&["verify-bounds", "--n", "1023", "--t", "2", "--grid", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["n"], 1023);
    // beyond the linear program's range
    assert!(report["report"]["records"][0].get("lpValue").is_none());
}

#[test]
fn coset_average_report_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("cosets.csv");
    let out = run(&[
        "coset-avg",
        "--family",
        "ext-hadamard",
        "--r",
        "3",
        "--dump-per-coset",
        path_str(&dump),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["cosets_evaluated"], 8);
    assert_eq!(report["report"]["mode"]["kind"], "exact");
    let csv = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with("representative,l1,linf,l2sq"));
}

#[test]
fn sampled_reports_do_not_depend_on_threads() {
    let args = |threads: &'static str| {
        [
            "--threads",
            threads,
            "coset-avg",
            "--family",
            "ext-dual-bch",
            "--t",
            "2",
            "--r",
            "5",
            "--samples",
            "500",
            "--seed",
            "11",
        ]
    };
    let one = json(&run(&args("1")));
    let four = json(&run(&args("4")));
    assert_eq!(one["report"], four["report"]);
    assert_eq!(one["config"]["seed"], 11);
    assert_eq!(one["config"]["samples"], 500);
}

#[test]
fn macwilliams_agrees_with_direct_dual() {
    let out = run(&["macwilliams", "--family", "simplex", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["directDualMatches"], true);
    // the dual of the simplex code is the Hamming code
    assert_eq!(report["report"]["dual"][3], "35");

    let out = run(&["macwilliams", "--family", "ext-hadamard", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["directDualMatches"], true);
    assert_eq!(report["report"]["dualProfile"]["d_bilateral"], 3);
}

#[test]
fn mse_identity_report() {
    let out = run(&[
        "mse-identity",
        "--family",
        "ext-hadamard",
        "--r",
        "3",
        "--grid",
        "65",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["report"]["maxGap"].as_f64().unwrap() < 1e-9);
    let middle = &report["report"]["records"][32];
    assert_eq!(middle["c"], 0.0);
    assert!((middle["lhs"].as_f64().unwrap() - 7.0 / 128.0).abs() < 1e-12);
}

#[test]
fn ensemble_and_gv_reports() {
    let out = run(&[
        "ensemble",
        "--n",
        "12",
        "--k",
        "4",
        "--samples",
        "40",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["N"], 16);
    assert_eq!(report["report"]["trials"], 40);

    let out = run(&[
        "gv-check",
        "--n",
        "64",
        "--c",
        "2",
        "--samples",
        "30",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["k"], 12);
    assert_eq!(report["config"]["c"], 2.0);
}

#[test]
fn invalid_parameters_exit_with_usage_status() {
    let out = run(&["spectrum", "--family", "ext-hadamard", "--r", "30"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["ensemble", "--n", "12", "--k", "4", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(2));
}
