use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use vlsikit::cli::{analysis_ids, run_case_file, validate_case};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlsikit")).args(args).output().expect("binary runs")
}

fn cases() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("cases");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

/// Writes `body` to a scratch case file unique to `name`.
fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("vlsikit-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

fn error_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr carries a JSON error")
}

#[test]
fn every_shipped_case_validates_and_runs() {
    let all = cases();
    assert!(all.len() >= 50, "only {} cases", all.len());
    for p in &all {
        let text = std::fs::read_to_string(p).unwrap();
        validate_case(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        run_case_file(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn every_analysis_has_a_case() {
    let used: Vec<String> = cases()
        .iter()
        .map(|p| {
            let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
            v["analysis"].as_str().unwrap().to_string()
        })
        .collect();
    let missing: Vec<&str> = analysis_ids().into_iter().filter(|id| !used.iter().any(|u| u == id)).collect();
    assert!(missing.is_empty(), "no case exercises {missing:?}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for p in cases() {
        let path = p.to_str().unwrap();
        let a = bin(&["run", path]);
        let b = bin(&["run", path]);
        assert!(a.status.success(), "{path}");
        assert_eq!(a.stdout, b.stdout, "{path}");
    }
}

#[test]
fn json_reports_carry_units() {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("cases/metal1_wire_rc.json");
    let out = bin(&["run", p.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["r"]["unit"], "Ω");
    assert_eq!(v["results"]["c"]["unit"], "fF");
    assert_eq!(v["results"]["c"]["value"], 450.0);
}

#[test]
fn table_format_lists_each_result() {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("cases/ring_mixed_stages.json");
    let out = bin(&["run", p.to_str().unwrap(), "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("analysis  ring_analyze"));
    assert!(text.contains("period") && text.contains("500 ns"));
}

#[test]
fn list_names_every_analysis() {
    let out = bin(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in analysis_ids() {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id} missing from list");
    }
}

#[test]
fn unknown_analysis_exits_1() {
    let p = scratch("unknown", r#"{"schema": 1, "analysis": "warp_drive", "params": {}}"#);
    for cmd in ["run", "validate"] {
        let out = bin(&[cmd, p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1));
        let e = error_json(&out);
        assert_eq!(e["error"]["kind"], "malformed_input");
        assert!(e["error"]["message"].as_str().unwrap().contains("warp_drive"));
    }
}

#[test]
fn missing_field_is_named() {
    let p = scratch("missing", r#"{"schema": 1, "analysis": "ring_design", "params": {"n_stages": 5, "duty": 0.5}}"#);
    let out = bin(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(error_json(&out)["error"]["message"].as_str().unwrap().contains("period"));
}

#[test]
fn wrong_schema_and_bad_json_exit_1() {
    let p = scratch("schema", r#"{"schema": 7, "analysis": "ring_design", "params": {}}"#);
    assert_eq!(bin(&["run", p.to_str().unwrap()]).status.code(), Some(1));
    let p = scratch("json", "{ not json");
    assert_eq!(bin(&["run", p.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(bin(&["run", "/nonexistent/case.json"]).status.code(), Some(1));
}

#[test]
fn analysis_failure_exits_2_after_validating() {
    let body = r#"{"schema": 1, "analysis": "ring_design", "params": {"n_stages": 3, "period": "2n", "duty": 0.1}}"#;
    let p = scratch("infeasible", body);
    assert!(bin(&["validate", p.to_str().unwrap()]).status.success());
    let out = bin(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["kind"], "infeasible");
}

#[test]
fn si_strings_match_plain_numbers() {
    let a = scratch("si", r#"{"schema": 1, "analysis": "ring_design", "params": {"n_stages": 5, "period": "2ns", "duty": 0.45}}"#);
    let b = scratch("plain", r#"{"schema": 1, "analysis": "ring_design", "params": {"n_stages": 5, "period": 2e-9, "duty": 0.45}}"#);
    let ra = run_case_file(&a).unwrap();
    let rb = run_case_file(&b).unwrap();
    assert_eq!(ra.results, rb.results);
}
