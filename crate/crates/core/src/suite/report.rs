use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one named identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity being checked, in words.
    pub anchor: String,
    /// Non-finite when the check raised an error.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time_ms: f64,
    /// Diagnostics are reported but do not decide the overall verdict.
    pub diagnostic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub diagnostics: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub pass: bool,
}

impl Report {
    /// Assembles a report, rejecting duplicate ids.
    pub fn new(suite: impl Into<String>, seed: u64, records: Vec<CheckRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate check id '{}'", r.id)));
            }
        }
        let checks: Vec<&CheckRecord> = records.iter().filter(|r| !r.diagnostic).collect();
        let passed = checks.iter().filter(|r| r.pass).count();
        let summary = Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
            diagnostics: records.len() - checks.len(),
        };
        Ok(Self { schema: SCHEMA_VERSION, suite: suite.into(), seed, pass: summary.failed == 0, records, summary })
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Records whose id starts with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.id.starts_with(prefix))
    }

    /// The same report with all wall times zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.wall_time_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Collects records in order, timing each check.
#[derive(Debug)]
pub struct Recorder {
    tol_override: Option<f64>,
    records: Vec<CheckRecord>,
}

impl Recorder {
    pub fn new(tol_override: Option<f64>) -> Self {
        Self { tol_override, records: Vec::new() }
    }

    fn push(&mut self, id: &str, anchor: &str, tol: f64, diagnostic: bool, f: impl FnOnce() -> Result<f64>) {
        let tolerance = self.tol_override.unwrap_or(tol);
        let start = Instant::now();
        let out = f();
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let (residual, error) = match out {
            Ok(r) => (r, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.records.push(CheckRecord {
            id: id.to_string(),
            anchor: anchor.to_string(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            wall_time_ms,
            diagnostic,
            error,
        });
    }

    /// A check that passes when the residual is at most `tol`.
    pub fn check(&mut self, id: &str, anchor: &str, tol: f64, f: impl FnOnce() -> Result<f64>) {
        self.push(id, anchor, tol, false, f);
    }

    /// A check with a tolerance that the global override does not touch, for exact or structural facts.
    pub fn exact(&mut self, id: &str, anchor: &str, f: impl FnOnce() -> Result<bool>) {
        let saved = self.tol_override.take();
        self.push(id, anchor, 0.0, false, || f().map(|ok| if ok { 0.0 } else { 1.0 }));
        self.tol_override = saved;
    }

    /// A reported value that does not count towards the verdict.
    pub fn diagnostic(&mut self, id: &str, anchor: &str, tol: f64, f: impl FnOnce() -> Result<f64>) {
        self.push(id, anchor, tol, true, f);
    }

    pub fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}

/// Largest value over an iterator of fallible residuals.
pub fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |acc, v| {
        let v = v?;
        Ok(if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_ignores_diagnostics() {
        let mut r = Recorder::new(None);
        r.check("a", "x", 1e-3, || Ok(1e-4));
        r.diagnostic("b", "y", 1e-3, || Ok(1.0));
        r.check("c", "z", 1e-3, || Err(Error::Domain("boom".into())));
        let rep = Report::new("t", 1, r.finish()).unwrap();
        assert_eq!(rep.summary, Summary { total: 2, passed: 1, failed: 1, diagnostics: 1 });
        assert!(!rep.pass);
        assert_eq!(rep.get("c").unwrap().error.as_deref(), Some("domain error: boom"));
        let json = rep.without_timing().to_json();
        assert!(json.contains("\"schema\": 1"));
        assert!(json.contains("\"residual\": null"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut r = Recorder::new(None);
        r.check("a", "", 1.0, || Ok(0.0));
        r.check("a", "", 1.0, || Ok(0.0));
        assert!(Report::new("t", 1, r.finish()).is_err());
    }

    #[test]
    fn override_spares_exact_checks() {
        let mut r = Recorder::new(Some(10.0));
        r.check("a", "", 1e-9, || Ok(1.0));
        r.exact("b", "", || Ok(false));
        let recs = r.finish();
        assert!(recs[0].pass);
        assert!(!recs[1].pass);
    }

    #[test]
    fn max_of_propagates_nan_and_errors() {
        assert_eq!(max_of([Ok(1.0), Ok(3.0)]).unwrap(), 3.0);
        assert!(max_of([Ok(1.0), Ok(f64::NAN), Ok(3.0)]).unwrap().is_nan());
        assert!(max_of([Ok(1.0), Err(Error::Domain("x".into()))]).is_err());
    }
}
