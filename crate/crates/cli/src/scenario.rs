//! Scenario files and their reports.
//!
//! A scenario names a provider, a seed, a default tolerance and a list of
//! steps; every key of a step besides `op`, `label`, `tol` and `max_seconds`
//! is passed to the operation as a parameter. Relative paths resolve against
//! the scenario file's directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use ydcat::report::{to_json_checked, CheckReport};
use ydcat::Error;

use crate::context::{Context, Params};
use crate::ops::{is_known, run_op};
use crate::{CliError, CliResult, EXIT_FAILED};

pub const DEFAULT_TOL: f64 = 1e-9;

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider: Option<String>,
    #[serde(default)]
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Step {
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Wall-clock budget; exceeding it fails the step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_seconds: Option<f64>,
    #[serde(flatten)]
    pub params: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub op: String,
    pub label: String,
    pub passed: bool,
    pub checks: CheckReport,
    /// Always an object; reports contain no nulls.
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub runtime_ms: u64,
    pub within_budget: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub passed: bool,
    pub steps: Vec<StepReport>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> CliResult<String> {
        Ok(to_json_checked(self)?)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            EXIT_FAILED
        }
    }

    /// One line per step: verdict, label and worst residual.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} {} ({} steps, {} ms)\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.scenario,
            self.steps.len(),
            self.runtime_ms
        );
        for s in &self.steps {
            out.push_str(&format!(
                "  {} {:<40} worst {:.3e}{}\n",
                if s.passed { "ok  " } else { "FAIL" },
                s.label,
                s.checks.worst(),
                s.error.as_deref().map(|e| format!("  error: {e}")).unwrap_or_default()
            ));
        }
        out
    }
}

/// Reads a scenario; the returned directory anchors its relative paths.
pub fn load_scenario(path: impl AsRef<Path>) -> CliResult<(Scenario, PathBuf)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let s: Scenario = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((s, base))
}

/// Residuals must encode; a non-finite one is a failure, recorded as such.
fn sanitize(checks: &mut CheckReport) {
    for c in &mut checks.checks {
        if !c.residual.is_finite() {
            c.detail = Some(format!("non-finite residual ({})", c.residual));
            c.residual = f64::MAX;
            c.passed = false;
        }
    }
}

/// Runs every step in order. Unknown operations are rejected before anything
/// runs; parse and truncation errors abort; other errors fail their step.
pub fn run_scenario(s: &Scenario, base: &Path) -> CliResult<Report> {
    if let Some(bad) = s.steps.iter().find(|st| !is_known(&st.op)) {
        return Err(CliError::UnknownOp(bad.op.clone()));
    }
    if !(s.tol.is_finite() && s.tol >= 0.0) {
        return Err(CliError::BadParam("`tol` must be a nonnegative number".into()));
    }
    let start = Instant::now();
    let mut ctx = Context::new(base, s.seed, s.tol, s.provider.clone());
    let mut steps = Vec::with_capacity(s.steps.len());
    for (i, st) in s.steps.iter().enumerate() {
        let tol = st.tol.unwrap_or(s.tol);
        let label = st.label.clone().unwrap_or_else(|| format!("{}#{i}", st.op));
        let params = Params(st.params.clone());
        let t0 = Instant::now();
        let (mut checks, data, error) = match run_op(&mut ctx, &st.op, &params, tol) {
            Ok(o) => (o.checks, o.data, None),
            Err(e) if e.aborts() => return Err(e),
            Err(e) => (CheckReport::new(), Value::Object(Map::new()), Some(e.to_string())),
        };
        let elapsed = t0.elapsed();
        sanitize(&mut checks);
        let within_budget = st.max_seconds.is_none_or(|m| elapsed.as_secs_f64() <= m);
        let passed = error.is_none() && within_budget && checks.passed();
        steps.push(StepReport {
            op: st.op.clone(),
            label,
            passed,
            checks,
            data,
            error,
            runtime_ms: elapsed.as_millis() as u64,
            within_budget,
        });
    }
    Ok(Report {
        scenario: s.name.clone(),
        seed: s.seed,
        passed: steps.iter().all(|s| s.passed),
        steps,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}
