use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{Amplitudes, SuiteConfig, Tolerances};
use crate::error::Result;

pub const SCHEMA: &str = "torext-verify-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: String,
    /// The identity or claim being checked.
    pub anchor: String,
    /// SHA-256 over the digests of every trial's inputs.
    pub inputs_digest: String,
    /// Worst residual over trials; `None` when a trial errored.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub dim: usize,
    pub degree: usize,
    pub oversample: usize,
    pub trials: usize,
    pub seed: u64,
    pub suites: Vec<String>,
    pub tolerances: Tolerances,
    pub amplitudes: Amplitudes,
}

impl Environment {
    pub fn from_config(cfg: &SuiteConfig, suites: Vec<String>) -> Self {
        Environment {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            dim: cfg.dim,
            degree: cfg.degree,
            oversample: cfg.oversample,
            trials: cfg.trials,
            seed: cfg.seed,
            suites,
            tolerances: cfg.tolerances,
            amplitudes: cfg.amplitudes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub schema_version: u32,
    pub environment: Environment,
    /// Fitted constants such as bridge proportionality factors.
    pub constants: BTreeMap<String, f64>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Report {
    pub fn new(environment: Environment) -> Self {
        Report {
            schema: SCHEMA.into(),
            schema_version: SCHEMA_VERSION,
            environment,
            constants: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "id",
            "suite",
            "anchor",
            "inputs_digest",
            "residual",
            "tolerance",
            "pass",
            "trials",
        ])?;
        for c in &self.checks {
            w.write_record([
                c.id.clone(),
                c.suite.clone(),
                c.anchor.clone(),
                c.inputs_digest.clone(),
                c.residual.map(|r| format!("{r:e}")).unwrap_or_default(),
                format!("{:e}", c.tolerance),
                c.pass.to_string(),
                c.trials.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(s, "{:<width$}  {:>11}  {:>9}  {:>6}  result", "check", "residual", "tol", "trials");
        for c in &self.checks {
            let r = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "error".into());
            let _ = writeln!(
                s,
                "{:<width$}  {:>11}  {:>9.1e}  {:>6}  {}",
                c.id,
                r,
                c.tolerance,
                c.trials,
                if c.pass { "pass" } else { "FAIL" }
            );
            for d in &c.diagnostics {
                let _ = writeln!(s, "{:<width$}    {d}", "");
            }
        }
        for (k, v) in &self.constants {
            let _ = writeln!(s, "constant {k} = {v:.9}");
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv()?,
            Format::Text => self.to_text(),
        })
    }

    pub fn emit(&self, format: Format, path: &Path) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(Environment::from_config(&SuiteConfig::default(), vec!["x".into()]));
        r.checks.push(CheckRecord {
            id: "x.one".into(),
            suite: "x".into(),
            anchor: "a = a".into(),
            inputs_digest: "00".into(),
            residual: Some(1.5e-12),
            tolerance: 1e-8,
            pass: true,
            trials: 3,
            diagnostics: vec![],
            wall_time_ms: None,
        });
        r.constants.insert("k".into(), 2.0);
        r
    }

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new(Environment::from_config(&SuiteConfig::default(), vec![]));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"], serde_json::json!([]));
    }

    #[test]
    fn json_round_trip_is_idempotent() {
        let r = sample();
        let text = r.to_json();
        assert_eq!(Report::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn csv_has_one_row_per_check() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(csv.lines().count(), 2);
    }
}
