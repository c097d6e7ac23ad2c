//! Machine-readable run reports. Default output is byte-stable for a fixed
//! config and seed; wall-clock timings are opt-in because they never are.

use serde::Serialize;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseResult {
    pub fn new(case: impl Into<String>, residual: f64, tolerance: f64) -> CaseResult {
        CaseResult {
            case: case.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CaseResult {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, cases: Vec<CaseResult>) -> SuiteReport {
        let pass = cases.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.into(),
            cases,
            pass,
            seconds: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub seed: u64,
    pub truncation: usize,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl Report {
    pub fn new(seed: u64, truncation: usize, suites: Vec<SuiteReport>) -> Report {
        let pass = suites.iter().all(|s| s.pass);
        Report {
            schema: REPORT_SCHEMA,
            seed,
            truncation,
            suites,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}
