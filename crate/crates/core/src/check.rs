//! Pass/fail record shared by the verification routines.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub label: String,
    pub cases: usize,
    pub failure: Option<String>,
    /// An empty case set is a genuine pass (nothing lies in the window)
    /// rather than a skipped check.
    pub vacuous: bool,
}

impl CheckResult {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), cases: 0, failure: None, vacuous: false }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && (self.cases > 0 || self.vacuous)
    }

    /// Nothing was compared and the check did not declare itself vacuous.
    pub fn skipped(&self) -> bool {
        self.failure.is_none() && self.cases == 0 && !self.vacuous
    }

    pub fn fail(&mut self, msg: String) {
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.skipped() {
            "SKIP"
        } else if self.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        write!(f, "{status} {} ({} cases", self.label, self.cases)?;
        if self.vacuous && self.cases == 0 {
            write!(f, ", vacuous")?;
        }
        write!(f, ")")?;
        if let Some(m) = &self.failure {
            write!(f, ": {m}")?;
        }
        Ok(())
    }
}
