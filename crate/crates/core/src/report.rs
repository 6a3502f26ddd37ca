//! Residual reports shared by all verification routines.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// An ordered list of named residual checks.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, residual: f64, tol: f64) -> &mut Self {
        let passed = residual.is_finite() && residual <= tol;
        self.checks.push(Check {
            name: name.into(),
            residual,
            tol,
            passed,
            detail: None,
        });
        self
    }

    pub fn push_detail(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        tol: f64,
        detail: impl Into<String>,
    ) -> &mut Self {
        self.push(name, residual, tol);
        self.checks.last_mut().unwrap().detail = Some(detail.into());
        self
    }

    /// Records a boolean condition as a residual of 0 or 1.
    pub fn push_flag(&mut self, name: impl Into<String>, ok: bool) -> &mut Self {
        self.push(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn residual(&self, name: &str) -> f64 {
        self.get(name).map(|c| c.residual).unwrap_or(f64::NAN)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn worst(&self) -> f64 {
        self.checks.iter().fold(0.0, |a, c| a.max(c.residual))
    }

    /// Converts a failing report into an `AxiomFailure` naming the violated checks.
    pub fn into_result(self) -> Result<CheckReport> {
        if self.passed() {
            Ok(self)
        } else {
            let names: Vec<String> = self
                .failures()
                .iter()
                .map(|c| format!("{} (residual {:.3e})", c.name, c.residual))
                .collect();
            Err(Error::AxiomFailure(names.join(", ")))
        }
    }
}

/// Serializes to JSON, refusing non-finite numbers anywhere in the value.
pub fn to_json_checked<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse {
        path: "<report>".into(),
        msg: e.to_string(),
    })?;
    if has_null_number(&v) {
        return Err(Error::NonFinite("report".into()));
    }
    serde_json::to_string_pretty(&v).map_err(|e| Error::Parse {
        path: "<report>".into(),
        msg: e.to_string(),
    })
}

// serde_json encodes NaN and infinities as null; reports never carry nulls otherwise.
fn has_null_number(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Null => true,
        serde_json::Value::Array(a) => a.iter().any(has_null_number),
        serde_json::Value::Object(o) => o.values().any(has_null_number),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_never_passes() {
        let mut r = CheckReport::new();
        r.push("x", f64::NAN, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn nan_is_rejected_at_encode_time() {
        let mut r = CheckReport::new();
        r.push("x", f64::NAN, 1.0);
        assert!(matches!(to_json_checked(&r), Err(Error::NonFinite(_))));
        let mut ok = CheckReport::new();
        ok.push("x", 0.0, 1.0);
        assert!(to_json_checked(&ok).is_ok());
    }
}
