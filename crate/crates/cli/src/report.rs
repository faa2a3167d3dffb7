use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

/// One measured quantity. Checks carry `passed`; informational records and
/// irregular levels leave it empty.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub name: String,
    pub measured: f64,
    pub reference: Option<f64>,
    pub margin: Option<f64>,
    pub passed: Option<bool>,
    pub regular: Option<bool>,
    pub tolerance: f64,
}

impl Record {
    pub fn info(name: impl Into<String>, measured: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            reference: None,
            margin: None,
            passed: None,
            regular: None,
            tolerance: 0.0,
        }
    }

    /// A check that passes when `margin >= -tolerance`.
    pub fn check(name: impl Into<String>, measured: f64, reference: f64, margin: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            reference: Some(reference),
            margin: Some(margin),
            passed: Some(margin >= -tolerance),
            regular: None,
            tolerance,
        }
    }

    pub fn at_level(mut self, regular: bool) -> Self {
        self.regular = Some(regular);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub samples: Option<usize>,
    pub tolerances: Value,
    pub seed: Option<u64>,
    pub timestamp: u64,
}

impl Provenance {
    pub fn new(samples: Option<usize>, tolerances: Value, seed: Option<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            samples,
            tolerances,
            seed,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub provenance: Provenance,
    /// Command-specific payload (sweep rows, optimizer trace, ...).
    pub details: Value,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, records: Vec<Record>, provenance: Provenance, details: Value) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.passed {
                Some(true) => {
                    summary.checks += 1;
                    summary.passed += 1;
                }
                Some(false) => {
                    summary.checks += 1;
                    summary.failed += 1;
                }
                None => summary.informational += 1,
            }
        }
        Self {
            command: command.to_string(),
            inputs,
            records,
            summary,
            provenance,
            details,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_matches_records() {
        let records = vec![
            Record::check("a", 1.0, 2.0, 1.0, 0.0),
            Record::check("b", 3.0, 2.0, -1.0, 0.5),
            Record::info("c", 0.0),
        ];
        let report = RunReport::new(
            "x",
            Value::Null,
            records,
            Provenance::new(None, Value::Null, None),
            Value::Null,
        );
        assert_eq!(
            report.summary,
            Summary {
                checks: 2,
                passed: 1,
                failed: 1,
                informational: 1
            }
        );
        assert!(!report.all_passed());
    }
}
