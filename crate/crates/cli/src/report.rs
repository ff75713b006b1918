//! Versioned JSON report shared by every suite.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "acx-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub id: String,
    pub inputs_digest: String,
    pub expected: Value,
    pub observed: Value,
    pub residual: f64,
    pub pass: bool,
}

impl Case {
    /// `inputs` is any stable textual rendering of what the case consumed.
    pub fn new(id: impl Into<String>, inputs: &str, expected: Value, observed: Value, residual: f64) -> Self {
        Case { id: id.into(), inputs_digest: digest(inputs), expected, observed, residual, pass: false }
    }
}

pub fn digest(inputs: &str) -> String {
    Sha256::digest(inputs.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub suite: f64,
    pub rank: f64,
    pub eq: f64,
    pub acs: f64,
    pub membership: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Config {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub h: Option<f64>,
    pub params: Value,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub config: Config,
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub timing_ms: u128,
}

impl Report {
    /// Marks each case against the suite tolerance (NaN residuals fail).
    pub fn new(suite: &str, config: Config, mut cases: Vec<Case>, timing_ms: u128) -> Self {
        let tol = config.tolerances.suite;
        for c in &mut cases {
            c.pass = c.residual <= tol;
        }
        let passed = cases.iter().filter(|c| c.pass).count();
        let summary = Summary { passed, failed: cases.len() - passed };
        Report { schema: SCHEMA, suite: suite.to_string(), config, cases, summary, timing_ms }
    }

    pub fn ok(&self) -> bool {
        self.summary.failed == 0
    }
}
