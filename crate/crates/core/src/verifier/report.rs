use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Version tag carried by every serialized report document.
pub const REPORT_SCHEMA: &str = "haarent-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs <= rhs`, slack `rhs - lhs`.
    Le,
    /// `lhs == rhs`, slack `-|lhs - rhs|`.
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one numeric check of one claim on one instance.
///
/// `passed` holds exactly when `slack >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub check: String,
    pub trial: u64,
    pub seed: u64,
    pub relation: Relation,
    pub status: Status,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub scope: String,
}

impl VerificationReport {
    fn new(claim_id: &str, check: &str, relation: Relation, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = match relation {
            Relation::Le => rhs - lhs,
            Relation::Eq => -(lhs - rhs).abs(),
        };
        let passed = slack >= -tolerance;
        VerificationReport {
            claim_id: claim_id.to_string(),
            check: check.to_string(),
            trial: 0,
            seed: 0,
            relation,
            status: if passed { Status::Pass } else { Status::Fail },
            passed,
            lhs,
            rhs,
            slack,
            tolerance,
            scope: String::new(),
        }
    }

    /// Claim `lhs <= rhs` up to `tolerance`.
    pub fn le(claim_id: &str, check: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(claim_id, check, Relation::Le, lhs, rhs, tolerance)
    }

    /// Claim `lhs == rhs` up to `tolerance`.
    pub fn eq(claim_id: &str, check: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(claim_id, check, Relation::Eq, lhs, rhs, tolerance)
    }

    /// A check whose hypotheses were not met on this instance.
    pub fn skipped(claim_id: &str, check: &str, reason: &str) -> Self {
        VerificationReport {
            claim_id: claim_id.to_string(),
            check: check.to_string(),
            trial: 0,
            seed: 0,
            relation: Relation::Le,
            status: Status::Skipped,
            passed: false,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            tolerance: 0.0,
            scope: reason.to_string(),
        }
    }

    /// A check that could not be evaluated because the computation failed.
    pub fn errored(claim_id: &str, check: &str, err: &Error) -> Self {
        let mut r = Self::skipped(claim_id, check, &format!("error: {err}"));
        r.status = Status::Fail;
        r
    }

    pub fn with_scope(mut self, scope: impl Into<String>) -> Self {
        self.scope = scope.into();
        self
    }

    pub fn with_trial(mut self, trial: u64, seed: u64) -> Self {
        self.trial = trial;
        self.seed = seed;
        self
    }

    pub fn is_skipped(&self) -> bool {
        self.status == Status::Skipped
    }
}

/// Writes reports as CSV with a header row and a fixed column order.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
    w.write_record([
        "claim_id", "check", "trial", "seed", "relation", "status", "passed", "lhs", "rhs", "slack",
        "tolerance", "scope",
    ])
    .map_err(io)?;
    for r in reports {
        let rel = match r.relation {
            Relation::Le => "le",
            Relation::Eq => "eq",
        };
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        };
        w.write_record([
            r.claim_id.as_str(),
            r.check.as_str(),
            &r.trial.to_string(),
            &r.seed.to_string(),
            rel,
            status,
            &r.passed.to_string(),
            &fmt_num(r.lhs),
            &fmt_num(r.rhs),
            &fmt_num(r.slack),
            &fmt_num(r.tolerance),
            r.scope.as_str(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
    Ok(())
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_slack_within_tolerance() {
        let r = VerificationReport::le("c", "x", 1.0, 1.0 - 1e-9, 1e-8);
        assert!(r.passed && r.slack < 0.0);
        let r = VerificationReport::le("c", "x", 1.0, 1.0 - 1e-7, 1e-8);
        assert!(!r.passed);
        let r = VerificationReport::eq("c", "x", 2.0, 2.0 + 1e-9, 1e-8);
        assert!(r.passed);
        let r = VerificationReport::eq("c", "x", f64::NAN, 2.0, 1e-8);
        assert!(!r.passed);
    }

    #[test]
    fn csv_has_header_and_blank_nan() {
        let reports = vec![
            VerificationReport::le("a", "b", 0.5, 1.0, 1e-8),
            VerificationReport::skipped("a", "b", "window"),
        ];
        let mut buf = Vec::new();
        write_csv(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("claim_id,check,trial"));
        assert!(lines[2].contains("skipped,false,,,,"));
    }
}
