//! Executable checks: ratio reports against caps, proof traces, the classical
//! counterexamples and a corpus-wide suite runner.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{CALIBRATED_CAP_SLACK, PAPER_CAP_SLACK};

pub mod classical;
pub mod examples;
pub mod suite;
pub mod theorems;
pub mod trace;

pub use classical::{
    bminus_value, check_bminus_upper, check_burkholder_p, check_dual_doob, check_khintchine, check_rosenthal,
    check_rosenthal_vars, product_variables,
};
pub use examples::{counterexample_report, cwikel_report, CounterexampleReport, CwikelReport, CwikelRow};
pub use suite::{dyadic_lambdas, run_suite, run_suite_on, CheckSummary, SuiteCheck, SuiteConfig, SuiteReport, SuiteRow};
pub use theorems::{
    absolute_differences, check_corollary_c, check_davis_properties, check_gundy_properties, check_regular_diagonal, check_theorem_a,
    check_theorem_b, corollary_c_lhs, theorem_a_lhs, theorem_b_lhs, TheoremBVariant,
};
pub use trace::{proof_trace_theorem_a, proof_trace_theorem_b, positive_parts, ProofTrace, TraceEntry, TraceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapProvenance {
    /// A constant written out explicitly in a proof.
    PaperConstant,
    /// A frozen corpus maximum standing in for an unspecified constant.
    Calibrated,
}

impl CapProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PaperConstant => "paper-constant",
            Self::Calibrated => "calibrated",
        }
    }

    fn slack(self) -> f64 {
        match self {
            Self::PaperConstant => PAPER_CAP_SLACK,
            Self::Calibrated => CALIBRATED_CAP_SLACK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub value: f64,
    pub provenance: CapProvenance,
}

impl Cap {
    pub fn paper(value: f64) -> Self {
        Self { value, provenance: CapProvenance::PaperConstant }
    }

    pub fn calibrated(value: f64) -> Self {
        Self { value, provenance: CapProvenance::Calibrated }
    }

    /// `ratio ≤ cap`, with the provenance's relative slack.
    pub fn admits(&self, ratio: f64) -> bool {
        ratio <= self.value * (1.0 + self.provenance.slack()) || self.value.is_infinite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub instance: Option<usize>,
    pub lambda: Option<f64>,
    pub cap: Cap,
    pub pass: bool,
}

impl RatioReport {
    /// `ratio = lhs / rhs`, or 0 when `rhs = 0` (degenerate input).
    pub fn new(id: impl Into<String>, lhs: f64, rhs: f64, cap: Cap) -> Self {
        let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        Self { id: id.into(), lhs, rhs, ratio, instance: None, lambda: None, cap, pass: cap.admits(ratio) }
    }

    pub fn at(mut self, instance: usize) -> Self {
        self.instance = Some(instance);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }
}

/// Where a calibrated cap came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratedCap {
    pub cap: f64,
    pub instance: Option<usize>,
    pub lambda: Option<f64>,
    /// Free-form description of the calibration corpus.
    pub corpus: String,
}

/// Frozen calibrated caps, keyed by report id. Missing ids cap at `∞`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CapsTable {
    pub entries: BTreeMap<String, CalibratedCap>,
}

impl CapsTable {
    pub fn cap(&self, id: &str) -> Cap {
        Cap::calibrated(self.entries.get(id).map_or(f64::INFINITY, |c| c.cap))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("cannot read caps file {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(format!("malformed caps file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("caps serialise")
    }

    /// Freeze the corpus maximum of every calibrated id in `report`.
    pub fn calibrate(report: &SuiteReport, corpus: &str) -> Self {
        let mut entries = BTreeMap::new();
        for s in report.summaries.iter().filter(|s| s.cap.provenance == CapProvenance::Calibrated) {
            entries.insert(
                s.id.clone(),
                CalibratedCap { cap: s.max_ratio, instance: s.worst_instance, lambda: s.worst_lambda, corpus: corpus.into() },
            );
        }
        Self { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_rhs_gives_zero_ratio() {
        let r = RatioReport::new("x", 0.0, 0.0, Cap::paper(1.0));
        assert_eq!(r.ratio, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn caps_admit_with_slack_only() {
        let c = Cap::paper(8.0);
        assert!(c.admits(8.0 * (1.0 + 1e-13)));
        assert!(!c.admits(8.0 * (1.0 + 1e-11)));
        assert!(Cap::calibrated(f64::INFINITY).admits(1e300));
        assert_eq!(CapsTable::default().cap("anything").value, f64::INFINITY);
    }
}
