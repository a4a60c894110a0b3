//! End-to-end tests of the `descent` binary: artifact determinism, exit
//! codes and fixture behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn descent(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descent"))
        .args(args)
        .arg("--out")
        .arg(out_dir)
        .env_remove("DESCENT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn critical_and_minima_on_the_packaged_ring() {
    let tmp = tempfile::tempdir().unwrap();
    let out = descent(
        &["critical", "--spec", &fixture("z9.json"), "--fn", "f"],
        tmp.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "critical.json")).unwrap();
    assert_eq!(report["critical_set"], serde_json::json!(["1", "2", "5", "6", "8"]));

    let out = descent(&["minima", "--spec", &fixture("z9.json"), "--fn", "f"], tmp.path());
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "minima.json")).unwrap();
    assert_eq!(report["minima"], serde_json::json!(["1", "2", "5", "6"]));
}

#[test]
fn artifacts_are_bit_identical_across_runs() {
    let run = |dir: &PathBuf| {
        let out = descent(
            &[
                "simulate",
                "--spec",
                &fixture("z9.json"),
                "--fn",
                "f",
                "--start",
                "4",
                "--horizon",
                "80",
                "--seed",
                "12345",
            ],
            dir,
        );
        assert!(out.status.success());
        (read(dir, "trajectory.csv"), read(dir, "simulate.json"))
    };
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (csv_a, json_a) = run(&d1.path().to_path_buf());
    let (csv_b, json_b) = run(&d2.path().to_path_buf());
    assert_eq!(csv_a, csv_b, "trajectory must replay bit-identically");
    assert_eq!(json_a, json_b);
    assert!(csv_a.starts_with("time,vertex\n0,4\n"));

    // audits are deterministic too
    let run_audit = |dir: &PathBuf| {
        let out = descent(
            &[
                "audit",
                "--spec",
                &fixture("zn-bar.json"),
                "--op",
                &fixture("ops/znbar-quadratic.json"),
                "--grid",
                "2",
            ],
            dir,
        );
        assert!(out.status.success());
        read(dir, "audit.json")
    };
    let a = run_audit(&d1.path().to_path_buf());
    let b = run_audit(&d2.path().to_path_buf());
    assert_eq!(a, b);
    assert!(a.contains("\"0bar\""), "witness names the pendant vertex");
}

#[test]
fn determine_exit_codes_separate_findings_from_violations() {
    let tmp = tempfile::tempdir().unwrap();
    // the quadratic nonlocal fails its audit, so its violations are
    // findings: exit 0
    let out = descent(
        &[
            "determine",
            "--spec",
            &fixture("zn-bar.json"),
            "--op",
            &fixture("ops/znbar-quadratic.json"),
            "--grid",
            "3",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "determine.json")).unwrap();
    assert_eq!(report["audits_pass"], serde_json::json!(false));
    assert!(report["violations"].as_u64().unwrap() >= 1);
    let csv = read(tmp.path(), "determine-witnesses.csv");
    assert!(csv.lines().count() > 1, "witness CSV has rows");

    // a clean steepest drop reports zero violations, exit 0
    let out = descent(
        &["determine", "--spec", &fixture("z9.json"), "--op", r#"{"op":"TD"}"#, "--grid", "2"],
        tmp.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "determine.json")).unwrap();
    assert_eq!(report["violations"], serde_json::json!(0));
    assert_eq!(report["audits_pass"], serde_json::json!(true));
}

#[test]
fn zaxioms_reports_the_packaged_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let out = descent(
        &[
            "zaxioms",
            "--spec",
            &fixture("eps-trunc.json"),
            "--op",
            &fixture("ops/eps-trunc.json"),
            "--grid",
            "3",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "zaxioms.json")).unwrap();
    let reports = report["reports"].as_array().unwrap();
    let z2 = reports.iter().find(|r| r["axiom"] == "Z2").unwrap();
    assert_eq!(z2["verdict"], "fails");
    assert_eq!(z2["witness"]["scalar"], "1/2");

    let out = descent(
        &[
            "classify",
            "--spec",
            &fixture("exafin.json"),
            "--op",
            &fixture("ops/exafin-mindrop.json"),
            "--grid",
            "3",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "classify.json")).unwrap();
    assert_eq!(report["outcome"], "hypothesis-fails");
    assert_eq!(report["vertices"], serde_json::json!(["a"]));
    assert_eq!(report["extracted"]["a"], serde_json::json!(["a"]));
}

#[test]
fn dispersion_csv_has_the_boundary_value() {
    let tmp = tempfile::tempdir().unwrap();
    let out = descent(
        &["dispersion", "--dim", "1", "--res", "512", "--fn", "x2", "--point", "1"],
        tmp.path(),
    );
    assert!(out.status.success());
    let csv = read(tmp.path(), "dispersion.csv");
    let last = csv.lines().last().unwrap();
    let value: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 4.0).abs() / 4.0 < 0.05, "finest row reads {value}");

    let out = descent(
        &["ball-identity", "--vector", "3,4", "--samples", "200000", "--seed", "9"],
        tmp.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "ball-identity.json")).unwrap();
    let est = report["estimate"].as_f64().unwrap();
    assert!((est - 25.0).abs() / 25.0 < 0.02);
}

#[test]
fn config_errors_exit_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = descent(&["critical", "--fn", "f"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "missing --spec");
    let out = descent(
        &["critical", "--spec", &fixture("z9.json"), "--fn", "nope"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2), "unknown function");
    let out = descent(
        &["audit", "--spec", &fixture("z9.json"), "--op", r#"{"op":"wat"}"#],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2), "bad operator expression");
}

#[test]
fn budget_errors_name_the_cap() {
    let tmp = tempfile::tempdir().unwrap();
    let out = descent(
        &[
            "determine",
            "--spec",
            &fixture("z9.json"),
            "--op",
            r#"{"op":"TD"}"#,
            "--grid",
            "4",
            "--cap",
            "1000",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("1000"), "cap named in: {msg}");
}
