//! End-to-end checks of the command-line surface: exit codes, JSON report
//! schema stability, and determinism.

use std::path::PathBuf;
use std::process::Command;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fricke"))
        .arg("--fixtures")
        .arg(fixtures())
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn report_keys(json: &serde_json::Value) -> Vec<String> {
    json.as_object()
        .expect("report is an object")
        .keys()
        .cloned()
        .collect()
}

#[test]
fn genus_check_passes_and_schema_is_stable() {
    let (code, out) = run(&["genus", "--max", "6", "--check", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        report_keys(&v),
        [
            "artifact_version",
            "checks",
            "command",
            "data",
            "fixture_schema",
            "parameters",
            "timing_ms"
        ]
        .map(String::from)
    );
    assert_eq!(v["fixture_schema"], 1);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
}

#[test]
fn genus_without_embedded_expectation_is_unchecked() {
    let (code, out) = run(&["genus", "--max", "1", "--check", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"][0]["status"], "info");
}

#[test]
fn verify_fixture_not_found_is_usage_error() {
    let (code, _) = run(&["verify", "9999"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_137_passes() {
    let (code, out) = run(&["verify", "137", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn disks_report_is_deterministic() {
    let (c1, out1) = run(&["disks", "--level", "137", "--prime", "5", "--json"]);
    let (c2, out2) = run(&["disks", "--level", "137", "--prime", "5", "--json"]);
    assert_eq!((c1, c2), (0, 0));
    let strip = |s: &str| {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    assert_eq!(strip(&out1), strip(&out2));
}

#[test]
fn points_search_lists_known_points() {
    let (code, out) = run(&[
        "points", "search", "--level", "199", "--height", "5", "--json",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["data"]["count"], 8);
}

#[test]
fn cm_refuses_to_evaluate_into_noise() {
    let (code, out) = run(&["points", "cm", "--level", "137", "--disc", "-7", "--json"]);
    assert_eq!(code, 1, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"][0]["status"], "inconclusive");
}
