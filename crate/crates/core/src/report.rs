//! Machine-readable verification verdicts.
//!
//! Reports serialize to a stable JSON schema:
//! `{id, status, witnesses: [string], config: {ring, L, A, m}}`,
//! sorted by id, so runs with identical inputs and seed are byte-identical.

use crate::monomial::TruncationConfig;
use crate::ring::RingSpec;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "approximate-pass")]
    ApproximatePass,
    #[serde(rename = "out-of-scope")]
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub ring: String,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "A")]
    pub a: usize,
    pub m: usize,
}

impl ReportConfig {
    pub fn new(ring: RingSpec, cfg: &TruncationConfig, max_layers: usize) -> Self {
        ReportConfig {
            ring: ring.to_string(),
            l: cfg.max_word_length(),
            a: cfg.max_arity(),
            m: max_layers,
        }
    }
}

/// One verified condition with its verdict and human-readable evidence.
/// Every failing report carries at least one witness.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub status: ReportStatus,
    pub witnesses: Vec<String>,
    pub config: ReportConfig,
}

impl CheckReport {
    pub fn pass(id: impl Into<String>, config: ReportConfig) -> Self {
        CheckReport { id: id.into(), status: ReportStatus::Pass, witnesses: Vec::new(), config }
    }

    pub fn fail(id: impl Into<String>, config: ReportConfig, witness: impl Into<String>) -> Self {
        CheckReport {
            id: id.into(),
            status: ReportStatus::Fail,
            witnesses: vec![witness.into()],
            config,
        }
    }

    pub fn approximate_pass(id: impl Into<String>, config: ReportConfig) -> Self {
        CheckReport {
            id: id.into(),
            status: ReportStatus::ApproximatePass,
            witnesses: Vec::new(),
            config,
        }
    }

    pub fn out_of_scope(id: impl Into<String>, config: ReportConfig, reason: impl Into<String>) -> Self {
        CheckReport {
            id: id.into(),
            status: ReportStatus::OutOfScope,
            witnesses: vec![reason.into()],
            config,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witnesses.push(witness.into());
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == ReportStatus::Fail
    }
}

/// Canonical ordering and rendering of a report batch.
pub fn finalize(mut reports: Vec<CheckReport>) -> Vec<CheckReport> {
    for r in &reports {
        debug_assert!(
            !r.is_fail() || !r.witnesses.is_empty(),
            "failing report {} must carry a witness",
            r.id
        );
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    reports
}

pub fn to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
}

pub fn to_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = match r.status {
            ReportStatus::Pass => "pass",
            ReportStatus::Fail => "FAIL",
            ReportStatus::ApproximatePass => "approximate-pass",
            ReportStatus::OutOfScope => "out-of-scope",
        };
        out.push_str(&format!("[{status}] {}\n", r.id));
        for w in &r.witnesses {
            out.push_str(&format!("    {w}\n"));
        }
    }
    out
}

/// Exit-code contract: 0 iff no report has status `fail`.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(CheckReport::is_fail) {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ReportConfig {
        ReportConfig::new(RingSpec::Rationals, &TruncationConfig::default(), 3)
    }

    #[test]
    fn json_shape_is_stable() {
        let reports = finalize(vec![
            CheckReport::fail("b-check", cfg(), "broken"),
            CheckReport::pass("a-check", cfg()),
        ]);
        assert_eq!(reports[0].id, "a-check");
        let json = to_json(&reports);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed[0]["status"], "pass");
        assert_eq!(parsed[1]["witnesses"][0], "broken");
        assert_eq!(parsed[0]["config"]["L"], 6);
        assert_eq!(parsed[0]["config"]["ring"], "q");
    }

    #[test]
    fn exit_code_contract() {
        let ok = vec![
            CheckReport::pass("x", cfg()),
            CheckReport::out_of_scope("y", cfg(), "set-theoretic"),
            CheckReport::approximate_pass("z", cfg()),
        ];
        assert_eq!(exit_code(&ok), 0);
        let bad = vec![CheckReport::fail("x", cfg(), "w")];
        assert_eq!(exit_code(&bad), 1);
    }
}
