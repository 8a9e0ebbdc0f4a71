use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::greenring::GreenElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    SkippedCap,
}

/// A Green ring element as printed in a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementView {
    pub coeffs: Vec<i64>,
    pub rendered: String,
}

impl From<&GreenElement> for ElementView {
    fn from(e: &GreenElement) -> Self {
        ElementView { coeffs: e.coeffs().to_vec(), rendered: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub expected: ElementView,
    pub actual: ElementView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub reference: String,
    pub status: Status,
    /// Number of individual cases that passed.
    pub cases: u64,
    #[serde(default)]
    pub witness: Option<Witness>,
    #[serde(default)]
    pub detail: Option<String>,
    #[serde(default)]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub skipped_cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub p: u32,
    pub e: u32,
    pub q: usize,
    pub dim_cap: usize,
    pub seed: u64,
    pub n_max: usize,
    pub conversion_n_max: usize,
}

/// Outcome of a verification run for one context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub context: ContextInfo,
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    #[serde(default)]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<VerificationReport, Error> {
        let report: VerificationReport = serde_json::from_str(text).map_err(|e| Error::ReportFormat(e.to_string()))?;
        let mut summary = Summary::default();
        for c in &report.checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::SkippedCap => summary.skipped_cap += 1,
            }
            if c.status == Status::Fail && c.witness.is_none() && c.detail.is_none() {
                return Err(Error::ReportFormat(format!("failed check {} carries no witness", c.check_id)));
            }
        }
        if summary != report.summary {
            return Err(Error::ReportFormat("summary does not match the check list".into()));
        }
        Ok(report)
    }
}

/// Why a check stopped early.
#[derive(Debug)]
pub enum Stop {
    Mismatch(Box<Witness>),
    Cap(String),
    Failed(String),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Stop::Cap(e.to_string()),
            other => Stop::Failed(other.to_string()),
        }
    }
}

pub type CheckOutcome = std::result::Result<u64, Stop>;

/// Fails with a witness unless the two elements agree.
pub fn expect_eq(n: Option<usize>, r: Option<usize>, expected: &GreenElement, actual: &GreenElement) -> std::result::Result<(), Stop> {
    if expected == actual {
        Ok(())
    } else {
        Err(Stop::Mismatch(Box::new(Witness { n, r, expected: expected.into(), actual: actual.into() })))
    }
}

pub fn expect(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Stop> {
    if cond {
        Ok(())
    } else {
        Err(Stop::Failed(msg()))
    }
}

/// Collects check results in order.
pub struct Recorder {
    pub checks: Vec<CheckResult>,
    timings: bool,
}

impl Recorder {
    pub fn new(timings: bool) -> Recorder {
        Recorder { checks: Vec::new(), timings }
    }

    pub fn run(&mut self, id: impl Into<String>, reference: &str, f: impl FnOnce() -> CheckOutcome) {
        self.run_with_detail(id, reference, || f().map(|c| (c, None)))
    }

    /// Like `run`, but a passing check may attach a note such as a measured value.
    pub fn run_with_detail(&mut self, id: impl Into<String>, reference: &str, f: impl FnOnce() -> std::result::Result<(u64, Option<String>), Stop>) {
        let start = Instant::now();
        let outcome = f();
        let wall_time_ms = self.timings.then(|| start.elapsed().as_millis() as u64);
        let mut c = CheckResult {
            check_id: id.into(),
            reference: reference.to_string(),
            status: Status::Pass,
            cases: 0,
            witness: None,
            detail: None,
            wall_time_ms,
        };
        match outcome {
            Ok((cases, detail)) => {
                c.cases = cases;
                c.detail = detail;
            }
            Err(Stop::Mismatch(w)) => {
                c.status = Status::Fail;
                c.witness = Some(*w);
            }
            Err(Stop::Cap(msg)) => {
                c.status = Status::SkippedCap;
                c.detail = Some(msg);
            }
            Err(Stop::Failed(msg)) => {
                c.status = Status::Fail;
                c.detail = Some(msg);
            }
        }
        self.checks.push(c);
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::SkippedCap => s.skipped_cap += 1,
            }
        }
        s
    }
}
