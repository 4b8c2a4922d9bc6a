use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qchaos(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchaos"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env("QCHAOS_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn meta(dir: &Path, subcommand: &str) -> Value {
    let text = fs::read_to_string(dir.join(format!("{subcommand}.meta.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(str::to_string).collect()
}

#[test]
fn spectrum_writes_tables_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchaos(dir.path(), &["spectrum", "--n", "7", "--xi", "64"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("spectrum_phases.csv").exists());
    assert!(dir.path().join("spectrum_spacings.csv").exists());
    let m = meta(dir.path(), "spectrum");
    assert_eq!(m["tool"], "qchaos");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["config"]["n"], 7);
    assert!(
        m["summary"]["eigenvalues_away_from_plus_minus_one"]
            .as_u64()
            .unwrap()
            <= 4
    );
    let total: u64 = m["summary"]["cluster_sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(total, 128);
}

#[test]
fn evec_stats_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchaos(
        dir.path(),
        &["evec-stats", "--n", "5", "--basis", "canonical"],
    );
    assert!(out.status.success());
    assert_eq!(
        header(&dir.path().join("evec_stats.csv")),
        ["y", "empirical_cdf", "pt_cdf"]
    );
    assert_eq!(
        meta(dir.path(), "evec-stats")["parameters"]["basis"],
        "canonical"
    );
}

#[test]
fn qft_check_residuals_are_tiny() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchaos(dir.path(), &["qft-check", "--algorithm", "qft", "--n", "6"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_path(dir.path().join("qft_check_residuals.csv")).unwrap();
    let rows: Vec<(String, f64)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3);
    for (name, value) in rows {
        assert!(value <= 1e-10, "{name} = {value}");
    }
    assert_eq!(
        header(&dir.path().join("qft_check_cutoff.csv")),
        ["cutoff", "error"]
    );
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchaos(
        dir.path(),
        &["roots", "--n", "4", "--format", "json", "--max-root", "4"],
    );
    assert!(out.status.success());
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("roots.json")).unwrap()).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["m", "defect"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(
        meta(dir.path(), "roots")["outputs"],
        serde_json::json!(["roots.json"])
    );
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["spectrum", "--n", "3", "--xi", "8"][..],
        &["angles", "--kind", "sideways"],
        &["spectrum", "--n", "40"],
        &["qft-check"],
        &["overlap", "--kind", "digital"],
        &["no-such-command"],
    ] {
        let out = qchaos(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let out = qchaos(&blocker.join("sub"), &["roots", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["angles", "--n", "4", "--ensemble", "6", "--seed", "9"];
    assert!(qchaos(a.path(), &args).status.success());
    assert!(qchaos(b.path(), &args).status.success());
    let csv_a = fs::read(a.path().join("angles.csv")).unwrap();
    let csv_b = fs::read(b.path().join("angles.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    let (mut ma, mut mb) = (meta(a.path(), "angles"), meta(b.path(), "angles"));
    for m in [&mut ma, &mut mb] {
        m["config"].as_object_mut().unwrap().remove("output");
    }
    assert_eq!(ma, mb);
}
