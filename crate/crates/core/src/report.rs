use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One assertion: what was checked, where, the measured value, the outcome,
/// and its margin (positive on the passing side).
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub value: Scalar,
    pub verdict: Verdict,
    #[serde(skip)]
    pub margin: Scalar,
}

impl Check {
    pub fn new(name: impl Into<String>, value: Scalar, pass: bool, margin: Scalar) -> Self {
        Check {
            name: name.into(),
            parameters: BTreeMap::new(),
            value,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            margin,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    /// Passes when `|deviation| <= tol`; the margin is `tol - |deviation|`.
    pub fn within(name: impl Into<String>, deviation: Scalar, tol: &Scalar) -> Self {
        let d = deviation.abs();
        let margin = tol - &d;
        Check::new(name, deviation, d <= *tol, margin)
    }

    /// Passes on exact zero; the margin is `-|value|`.
    pub fn exact_zero(name: impl Into<String>, value: Scalar) -> Self {
        let pass = value.is_zero();
        let margin = -value.abs();
        Check::new(name, value, pass, margin)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Smallest margin over all checks; negative iff something failed
    /// (or an exact-equality check reports zero slack).
    pub worst_margin: Scalar,
}

impl Default for VerificationReport {
    fn default() -> Self {
        VerificationReport::new()
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport { checks: Vec::new(), worst_margin: Scalar::zero() }
    }

    pub fn push(&mut self, check: Check) {
        if self.checks.is_empty() || check.margin < self.worst_margin {
            self.worst_margin = check.margin.clone();
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl FromIterator<Check> for VerificationReport {
    fn from_iter<I: IntoIterator<Item = Check>>(iter: I) -> Self {
        let mut r = VerificationReport::new();
        for c in iter {
            r.push(c);
        }
        r
    }
}
