//! Report schema, JSON and CSV output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub suite: String,
    pub id: String,
    pub statement: String,
    pub tolerance: f64,
    /// Largest defect over all trials; `None` when no trial produced one.
    pub worst_defect: Option<f64>,
    pub samples: usize,
    /// Trials that failed before measuring this invariant.
    pub errors: usize,
    pub passed: bool,
}

impl InvariantResult {
    pub fn evaluate(&mut self) {
        self.passed = self.errors == 0 && self.worst_defect.is_some_and(|w| w <= self.tolerance);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub suite: String,
    pub trial: usize,
    pub seed: u64,
    /// Non-finite defects are recorded as `null`.
    pub defects: BTreeMap<String, Option<f64>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub passed: bool,
    pub config: serde_json::Value,
    pub invariants: Vec<InvariantResult>,
    pub trials: Vec<TrialRecord>,
    pub wall_time_seconds: f64,
}

impl SuiteReport {
    pub fn empty(suite: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            passed: true,
            config: serde_json::Value::Null,
            invariants: Vec::new(),
            trials: Vec::new(),
            wall_time_seconds: 0.0,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.invariants.iter().filter(|i| !i.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall-time zeroed, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_seconds = 0.0;
        copy.to_json()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "invariant", "passed", "worst_defect", "tolerance", "samples", "errors", "statement"])
            .expect("in-memory write");
        for i in &self.invariants {
            w.write_record([
                i.suite.clone(),
                i.id.clone(),
                i.passed.to_string(),
                i.worst_defect.map(|d| format!("{d:e}")).unwrap_or_default(),
                format!("{:e}", i.tolerance),
                i.samples.to_string(),
                i.errors.to_string(),
                i.statement.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// The CSV summary sits next to the JSON report.
pub fn csv_path(report_path: &Path) -> PathBuf {
    report_path.with_extension("csv")
}

pub fn write_report(report: &SuiteReport, path: &Path) -> std::io::Result<PathBuf> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, report.to_json())?;
    let csv = csv_path(path);
    std::fs::write(&csv, report.to_csv())?;
    Ok(csv)
}

pub fn read_report(path: &Path) -> Result<SuiteReport, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_report(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_report(text: &str) -> Result<SuiteReport, String> {
    let report: SuiteReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(format!("unsupported schema_version {}", report.schema_version));
    }
    Ok(report)
}
