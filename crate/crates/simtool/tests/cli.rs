use std::path::Path;
use std::process::{Command, Output};

use qtanner::cayley_complex::{FiniteGroup, GeneratingSetPair, LeftRightCayleyComplex};
use qtanner::local_codes::ClassicalCode;
use qtanner::qtc::QuantumTannerCode;
use serde_json::Value;

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtanner-sim"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn write_repetition_bundle(path: &Path) {
    let complex = LeftRightCayleyComplex::build(
        FiniteGroup::cyclic(9).unwrap(),
        GeneratingSetPair {
            gens_a: vec![1, 8, 2, 7],
            gens_b: vec![3, 6, 4, 5],
        },
    )
    .unwrap();
    let code =
        QuantumTannerCode::assemble(complex, ClassicalCode::repetition(4), ClassicalCode::repetition(4)).unwrap();
    std::fs::write(path, code.to_bundle_json(Default::default())).unwrap();
}

#[test]
fn build_cyclic_instance() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    let out = sim(&[
        "build",
        "--group",
        "cyclic:12",
        "--delta",
        "4",
        "--rho",
        "1/4",
        "--seed",
        "3",
        "--out",
        bundle.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert_eq!(summary["n"], 96);
    assert_eq!(summary["group_order"], 12);
    assert_eq!(summary["graphs"].as_array().unwrap().len(), 3);
    let code = QuantumTannerCode::from_bundle_json(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    assert_eq!(code.n(), 96);
    assert_eq!(code.code_a().dimension(), 1);
    assert_eq!(code.code_b().dimension(), 3);
}

#[test]
fn invalid_q_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    let out = sim(&[
        "build",
        "--group",
        "psl2:4",
        "--delta",
        "4",
        "--out",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "invalid-q");
    assert!(!bundle.exists());
}

#[test]
fn usage_errors_exit_with_one() {
    let out = sim(&["simulate", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "usage");
    let out = sim(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn missing_bundle_is_an_io_error() {
    let out = sim(&["inspect", "--bundle", "/nonexistent/bundle.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn inspect_reports_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    write_repetition_bundle(&bundle);
    let out = sim(&["inspect", "--bundle", bundle.to_str().unwrap()]);
    assert!(out.status.success());
    let r = stdout_json(&out);
    let n = r["n"].as_u64().unwrap();
    assert_eq!(n, 72);
    assert_eq!(
        r["k"].as_u64().unwrap(),
        n - r["rank_x"].as_u64().unwrap() - r["rank_z"].as_u64().unwrap()
    );
    let degrees: Vec<u64> = r["graphs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![8, 16, 16]);
    assert_eq!(r["dual_tensor"]["dimension"], r["dual_tensor"]["formula"]);
    assert_eq!(r["dual_tensor"]["formula"], 4 + 4 - 1);
    assert_eq!(r["dual_tensor"]["distance"], 4);
    let total = |h: &Value| {
        h.as_object()
            .unwrap()
            .values()
            .map(|c| c.as_u64().unwrap())
            .sum::<u64>()
    };
    assert_eq!(total(&r["x_col_weights"]), 72);
    assert_eq!(total(&r["x_row_weights"]), r["x_rows"].as_u64().unwrap());
    // Z checks are G_A ⊗ G_B with one all-ones generator each: weight 16, two per qubit.
    assert_eq!(r["z_row_weights"]["16"], r["z_rows"]);
    assert_eq!(r["z_col_weights"]["2"], 72);
    assert_eq!(r["local_codes"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    write_repetition_bundle(&bundle);
    let run = |name: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let out = sim(&[
            "simulate",
            "--bundle",
            bundle.to_str().unwrap(),
            "--p",
            "0.08",
            "--trials",
            "300",
            "--seed",
            "9",
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (
            std::fs::read(&csv).unwrap(),
            std::fs::read(csv.with_extension("json")).unwrap(),
        )
    };
    let (a_csv, a_json) = run("a");
    let (b_csv, b_json) = run("b");
    assert_eq!(a_csv, b_csv);
    assert_eq!(a_json, b_json);
    let text = String::from_utf8(a_csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,n,trials,failures,failure_rate,ci_low,ci_high"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[1], 72.0);
    assert_eq!(row[2], 300.0);
    assert!(row[3] <= row[2]);
    assert!(row[5] <= row[4] && row[4] <= row[6]);
    let sidecar: Value = serde_json::from_slice(&a_json).unwrap();
    let records = sidecar["results"][0]["records"].as_array().unwrap();
    assert_eq!(records.len(), 300);
    assert!(records.iter().enumerate().all(|(i, r)| r["trial"] == i));
    assert!(records.iter().all(|r| r.get("wall_time_us").is_none()));
}

#[test]
fn sweep_at_zero_noise_has_no_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    write_repetition_bundle(&bundle);
    let out = sim(&[
        "sweep",
        "--bundle",
        bundle.to_str().unwrap(),
        "--p-list",
        "0",
        "--trials",
        "50",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let row: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(&row[..6], &[0.0, 72.0, 50.0, 0.0, 0.0, 0.0]);
    let z2 = 1.959963984540054f64.powi(2);
    assert!((row[6] - z2 / (50.0 + z2)).abs() < 1e-12);
}

#[test]
fn trace_and_timing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    write_repetition_bundle(&bundle);
    let csv = dir.path().join("r.csv");
    let trace = dir.path().join("trace.txt");
    let out = sim(&[
        "simulate",
        "--bundle",
        bundle.to_str().unwrap(),
        "--weight",
        "2",
        "--trials",
        "5",
        "--mode",
        "exact",
        "--timing",
        "--out",
        csv.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("# trial")).count(), 5);
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let fields: Vec<i64> = line.split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(fields.len(), 5);
        assert!(fields[2] < 0);
    }
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert!(sidecar["results"][0]["records"][0]["wall_time_us"].is_u64());
}

#[test]
fn sweep_with_comparison_writes_trend_report() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.json");
    write_repetition_bundle(&small);
    let large = dir.path().join("large.json");
    let rep = dir.path().join("rep.txt");
    std::fs::write(&rep, ClassicalCode::repetition(4).to_text()).unwrap();
    let out = sim(&[
        "build",
        "--group",
        "cyclic:15",
        "--delta",
        "4",
        "--seed",
        "1",
        "--code-a",
        rep.to_str().unwrap(),
        "--code-b",
        rep.to_str().unwrap(),
        "--out",
        large.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = dir.path().join("s.csv");
    let out = sim(&[
        "sweep",
        "--bundle",
        small.to_str().unwrap(),
        "--compare",
        large.to_str().unwrap(),
        "--p-list",
        "0.01,0.05",
        "--trials",
        "100",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trend = stdout_json(&out);
    assert_eq!(trend["small_n"], 72);
    assert_eq!(trend["large_n"], 120);
    assert_eq!(trend["points"].as_array().unwrap().len(), 2);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);
}
