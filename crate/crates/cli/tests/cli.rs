// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qwalk::phasespace::count_lobes;
use qwalk_cli::report::{read_json, to_json, RunReport, SimulationReport};
use tempfile::TempDir;

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .env_remove(qwalk_cli::OUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn engineer(dir: &TempDir, name: &str, extra: &[&str]) -> (i32, std::path::PathBuf) {
    let path = dir.path().join(name);
    let mut args = vec!["engineer", "--steps", "5", "--out", path_str(&path)];
    args.extend_from_slice(extra);
    let out = qwalk(&args);
    (code(&out), path)
}

#[test]
fn engineer_cat_reaches_target_at_half_probability() {
    let dir = TempDir::new().unwrap();
    let (rc, path) = engineer(
        &dir,
        "cat.json",
        &["--target", "cat:phi=0", "--seed", "11", "--compile", "--shots", "10000"],
    );
    assert_eq!(rc, 0);
    let report: RunReport = read_json(&path).unwrap();
    assert!(report.passed);
    assert!(report.result.fidelity >= 0.999);
    assert!((report.result.probability - 0.5).abs() <= 0.02);
    assert_eq!(report.master_seed, 11);
    assert_eq!(report.target, "cat:phi=0");
    assert!((report.basis_probabilities[0] - report.result.fidelity).abs() < 1e-12);
    let optics = report.optics.as_ref().unwrap();
    // 5 steps of QWP-HWP-QWP + Q-plate, then a final waveplate stack
    assert_eq!(optics.elements.len(), 5 * 4 + 3);
    assert!(optics.fidelity_to_ideal >= 1.0 - 1e-9);
    assert!((optics.probability - report.result.probability).abs() < 1e-10);
    let m = report.measurement.as_ref().unwrap();
    assert_eq!(m.counts.total(), 10_000);
    assert!((m.estimate.value - report.result.fidelity).abs() <= 5.0 * m.estimate.sigma.max(1e-4));
}

#[test]
fn report_round_trips_byte_identically() {
    let dir = TempDir::new().unwrap();
    let (rc, path) = engineer(
        &dir,
        "f.json",
        &[
            "--target",
            "fourier:k=3",
            "--seed",
            "5",
            "--starts",
            "16",
            "--compile",
            "--shots",
            "500",
        ],
    );
    assert_eq!(rc, 0);
    let text = fs::read_to_string(&path).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert!(report.result.fidelity >= 0.999);
    assert_eq!(to_json(&report).unwrap(), text);

    // fields written by a newer version are ignored
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["added_later"] = serde_json::json!({"x": 1});
    let again: RunReport = serde_json::from_value(v).unwrap();
    assert_eq!(again, report);
}

#[test]
fn engineer_is_deterministic_and_records_generated_seed() {
    let dir = TempDir::new().unwrap();
    let args = [
        "--target",
        "random:kind=complex,seed=3",
        "--seed",
        "99",
        "--starts",
        "8",
    ];
    let (_, a) = engineer(&dir, "a.json", &args);
    let (_, b) = engineer(&dir, "b.json", &args);
    let a: RunReport = read_json(&a).unwrap();
    let b: RunReport = read_json(&b).unwrap();
    assert_eq!(a.result, b.result);
    assert_eq!(a.output_amplitudes, b.output_amplitudes);

    let (_, c) = engineer(&dir, "c.json", &["--target", "cat:phi=0", "--starts", "4"]);
    let c: RunReport = read_json(&c).unwrap();
    assert_eq!(c.optimizer.seed, c.master_seed);
    let (_, d) = engineer(
        &dir,
        "d.json",
        &[
            "--target",
            "cat:phi=0",
            "--starts",
            "4",
            "--seed",
            &c.master_seed.to_string(),
        ],
    );
    let d: RunReport = read_json(&d).unwrap();
    assert_eq!(c.result, d.result);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(engineer(&dir, "x.json", &["--target", "amps:[1,0,0,0,0]"]).0, 2);
    assert_eq!(engineer(&dir, "x.json", &["--target", "nonsense"]).0, 2);
    assert_eq!(
        engineer(&dir, "x.json", &["--target", "fourier:k=1", "--steps", "0"]).0,
        2
    );
    // full-lattice amplitudes with weight on a wrong-parity site
    assert_eq!(
        engineer(&dir, "x.json", &["--target", "amps:[1,1,0,0,0,0,0,0,0,0,0]"]).0,
        3
    );
    assert!(!dir.path().join("x.json").exists());
    // one start with a tiny budget cannot reach a generic target
    let path = dir.path().join("low.json");
    let out = qwalk(&[
        "engineer",
        "--target",
        "random:kind=complex,seed=1",
        "--steps",
        "5",
        "--starts",
        "1",
        "--seed",
        "1",
        "--out",
        path_str(&path),
    ]);
    let report: RunReport = read_json(&path).unwrap();
    assert_eq!(code(&out), if report.passed { 0 } else { 1 });
    assert_eq!(code(&qwalk(&["qfunc", "--grid", "12"])), 2);
    assert_eq!(code(&qwalk(&["qfunc", "--grid", "0x4"])), 2);
    assert_eq!(code(&qwalk(&["simulate", "--coins", "1,2"])), 2);
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|s| s.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn qfunc_interference_has_ten_lobes() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("interf.csv");
    let out = qwalk(&[
        "qfunc",
        "--state",
        "psi2",
        "--field",
        "interf",
        "--grid",
        "128x720",
        "--out",
        path_str(&path),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("meridian loop: 10"));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["alpha", "beta", "value"]);
    assert_eq!(rows.len(), 128 * 720);
    // loop through both poles in the plane perpendicular to the cat axis
    let at = |beta: f64| -> Vec<f64> {
        rows.iter()
            .filter(|r| (r[1] - beta).abs() < 1e-9)
            .map(|r| r[2])
            .collect()
    };
    let mut ring = at(PI / 2.0);
    let back = at(3.0 * PI / 2.0);
    assert_eq!(ring.len(), 128);
    ring.extend(back.iter().rev().skip(1).take(126));
    assert_eq!(count_lobes(&ring), 10);
}

#[test]
fn qfunc_values_are_probabilities_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = qwalk(&[
            "qfunc",
            "--state",
            "psi1",
            "--field",
            "q",
            "--grid",
            "33x64",
            "--out",
            path_str(p),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let (_, rows) = read_csv(&a);
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[2])));
    // 17 significant digits
    let text = fs::read_to_string(&a).unwrap();
    let first = text.lines().nth(2).unwrap();
    let mantissa = first.split(',').nth(2).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);

    let c = dir.path().join("c.csv");
    let out = qwalk(&[
        "qfunc",
        "--state",
        "inc",
        "--field",
        "ratio",
        "--grid",
        "9x8",
        "--coords",
        "cartesian",
        "--out",
        path_str(&c),
    ]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&c);
    assert_eq!(header, ["x", "y", "z", "value"]);
    assert!(rows.iter().all(|r| r[3].is_nan() || (r[3] - 1.0).abs() < 1e-12));
}

#[test]
fn env_var_sets_default_output_directory() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["qfunc", "--grid", "4x4"])
        .env(qwalk_cli::OUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("qfunc.csv").exists());
}

#[test]
fn compile_and_simulate_agree_with_report() {
    let dir = TempDir::new().unwrap();
    let (rc, report_path) = engineer(
        &dir,
        "r.json",
        &["--target", "scscat:sign=-", "--seed", "2", "--starts", "32"],
    );
    assert_eq!(rc, 0);
    let report: RunReport = read_json(&report_path).unwrap();

    let table = dir.path().join("circuit.tsv");
    let out = qwalk(&[
        "compile",
        "--report",
        path_str(&report_path),
        "--alpha0",
        "-0.4",
        "--json",
        "--out",
        path_str(&table),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&table).unwrap();
    assert_eq!(
        text.lines().next().unwrap().split('\t').collect::<Vec<_>>(),
        ["step", "element", "angle", "delta", "alpha0", "q"]
    );
    assert_eq!(text.lines().filter(|l| l.contains("QPLATE")).count(), 5);
    assert!(dir.path().join("circuit.json").exists());

    for physical in [false, true] {
        let sim = dir.path().join(format!("sim{physical}.json"));
        let mut args = vec![
            "simulate",
            "--report",
            path_str(&report_path),
            "--target",
            "scscat:sign=-",
            "--out",
            path_str(&sim),
        ];
        if physical {
            args.extend(["--physical", "--alpha0", "1.3"]);
        }
        assert_eq!(code(&qwalk(&args)), 0);
        let s: SimulationReport = read_json(&sim).unwrap();
        assert!((s.probability - report.result.probability).abs() < 1e-10);
        assert!((s.fidelity.unwrap() - report.result.fidelity).abs() < 1e-9);
    }

    let coins: Vec<String> = report
        .result
        .coins
        .iter()
        .map(|c| c.as_array().map(|v| format!("{v:e}")).join(","))
        .collect();
    let sim = dir.path().join("direct.json");
    let out = qwalk(&[
        "simulate",
        "--coins",
        &coins.join(";"),
        "--projection",
        "minus",
        "--out",
        path_str(&sim),
    ]);
    assert_eq!(code(&out), 0);
    let minus: SimulationReport = read_json(&sim).unwrap();
    assert!((minus.probability + report.result.probability - 1.0).abs() < 1e-10);
}

#[test]
fn batch_runs_the_full_table() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("suite");
    let out = qwalk(&[
        "batch",
        "--suite",
        "table1",
        "--seed",
        "2026",
        "--out",
        path_str(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(out_dir.join("summary.csv")).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "index",
            "label",
            "target",
            "seed",
            "fidelity",
            "probability",
            "reference_probability",
            "status"
        ]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 32);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), i + 1);
        assert_eq!(&row[7], "ok");
        assert!(row[4].parse::<f64>().unwrap() >= 0.999);
        let p: f64 = row[5].parse().unwrap();
        if i < 6 {
            assert!((p - 0.5).abs() <= 0.02, "{} p = {p}", &row[1]);
        }
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("batch.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 2026);
    assert_eq!(manifest["reports"].as_array().unwrap().len(), 32);
    // each report reproduces from its recorded seed
    let first: RunReport = read_json(&out_dir.join(manifest["reports"][0].as_str().unwrap())).unwrap();
    assert_eq!(first.master_seed.to_string(), &rows[0][3]);
}
