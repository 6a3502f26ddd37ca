//! Exit codes, report encoding and subcommands of the `ydcat` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use ydcat_cli::{run_scenario, Report, Scenario, StepReport};

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn ydcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ydcat")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ydcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_text(name: &str, text: &str) -> Output {
    let p = scratch(name, text);
    ydcat(&["run", p.to_str().unwrap()])
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn empty_pipeline_passes_with_zero_steps() {
    let out = ydcat(&["run", scenarios().join("empty.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["steps"].as_array().unwrap().len(), 0);
}

#[test]
fn roundtrip_s3_adjoint_passes_below_1e8() {
    let out = ydcat(&["run", scenarios().join("roundtrip-s3-adjoint.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for c in r["steps"][0]["checks"]["checks"].as_array().unwrap() {
        assert!(c["residual"].as_f64().unwrap() <= 1e-8, "{c}");
    }
    assert_eq!(r["steps"][0]["data"]["rank"], 6);
}

#[test]
fn missing_fixture_exits_3() {
    let out = run_text(
        "missing.json",
        r#"{"name": "missing", "provider": "finite:does/not/exist.json", "steps": [{"op": "irreps"}]}"#,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does/not/exist.json"));
}

#[test]
fn missing_scenario_and_malformed_scenario_exit_3() {
    assert_eq!(ydcat(&["run", "/nonexistent/scenario.json"]).status.code(), Some(3));
    assert_eq!(run_text("broken.json", r#"{"name": "broken", "steps": ["#).status.code(), Some(3));
}

#[test]
fn unknown_operation_exits_2_before_running_anything() {
    let text = format!(
        r#"{{"name": "unknown", "provider": "finite:{}", "steps": [{{"op": "validate"}}, {{"op": "frobnicate"}}]}}"#,
        fixtures().join("s3.json").display()
    );
    let out = run_text("unknown.json", &text);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn truncation_exits_4() {
    // the dual up to spin 2 needs more irreducibles than a level-1 provider has
    let out = run_text(
        "truncated.json",
        r#"{"name": "truncated", "provider": "suq2:q=1/2,L=1", "steps": [{"op": "ydcheck", "algebra": "dual", "level": 2}]}"#,
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failed_expectation_exits_1_and_reports_the_step() {
    let text = format!(
        r#"{{"name": "wrong", "provider": "finite:{}", "steps": [
            {{"op": "irreps", "label": "right", "expect_dims": [1, 1, 2]}},
            {{"op": "irreps", "label": "wrong", "expect_dims": [1, 2, 2]}}]}}"#,
        fixtures().join("s3.json").display()
    );
    let out = run_text("wrong.json", &text);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(r["steps"][0]["passed"], true);
    assert_eq!(r["steps"][1]["passed"], false);
}

#[test]
fn step_errors_fail_the_step_and_the_run_continues() {
    // SU_q(2) has no finite Hopf data, so the adjoint algebra is refused
    let text = r#"{"name": "refused", "provider": "suq2:q=1/2,L=1", "steps": [
        {"op": "ydcheck", "algebra": "adjoint"},
        {"op": "irreps"}]}"#;
    let out = run_text("refused.json", text);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(r["steps"][0]["error"].as_str().unwrap().contains("finite"));
    assert_eq!(r["steps"][1]["passed"], true);
}

#[test]
fn seed_is_recorded_and_overridable() {
    let out = ydcat(&["run", scenarios().join("empty.json").to_str().unwrap(), "--seed", "42"]);
    assert_eq!(report(&out)["seed"], 42);
}

#[test]
fn report_with_nan_residual_is_rejected_at_encode_time() {
    let mut checks = ydcat::report::CheckReport::new();
    checks.push("bad", f64::NAN, 1.0);
    let r = Report {
        scenario: "nan".into(),
        seed: 0,
        passed: false,
        steps: vec![StepReport {
            op: "validate".into(),
            label: "nan".into(),
            passed: false,
            checks,
            data: serde_json::json!({}),
            error: None,
            runtime_ms: 0,
            within_budget: true,
        }],
        runtime_ms: 0,
    };
    assert!(r.to_json().is_err());
}

#[test]
fn scenarios_roundtrip_through_json() {
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let s: Scenario = serde_json::from_str(&text).unwrap();
        let again: Scenario = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(serde_json::to_value(&s).unwrap(), serde_json::to_value(&again).unwrap());
    }
}

#[test]
fn library_and_binary_agree() {
    let (s, base) = ydcat_cli::load_scenario(scenarios().join("ac06-adjoint-action.json")).unwrap();
    let lib = run_scenario(&s, Path::new(&base)).unwrap();
    let out = ydcat(&["run", scenarios().join("ac06-adjoint-action.json").to_str().unwrap()]);
    let bin = report(&out);
    assert_eq!(bin["steps"][0]["checks"], serde_json::to_value(&lib.steps[0].checks).unwrap());
}

#[test]
fn subcommands_build_single_step_scenarios() {
    let s3 = fixtures().join("s3.json");
    let out = ydcat(&["validate", "--fixture", s3.to_str().unwrap(), "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["steps"][0]["data"]["dim"], 6);

    let out = ydcat(&[
        "poisson",
        "--fixture",
        s3.to_str().unwrap(),
        "--check",
        "harmonic",
        "--measure",
        r#"{"U2": 1}"#,
        "--param",
        "expect_dim=1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = ydcat(&["irreps", "--provider", "suq2:q=1/2,L=1", "--param", "expect_dims=[1,2,3]"]);
    assert_eq!(out.status.code(), Some(0));

    let path = std::env::temp_dir().join(format!("ydcat-report-{}.json", std::process::id()));
    let out = ydcat(&["galois", "--fixture", s3.to_str().unwrap(), "--check", "spectral", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["steps"][0]["data"]["full_multiplicity"], true);
}

#[test]
fn validate_without_input_is_a_usage_error() {
    assert_eq!(ydcat(&["validate"]).status.code(), Some(3));
}
