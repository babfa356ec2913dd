//! Corpus-wide runner: every selected check on every instance, with per-id
//! summaries.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomp::davis;
use crate::error::{Error, Result};
use crate::parallel;
use crate::space::{corpus, CorpusSpec, Instance, Martingale};
use crate::verify::{
    check_bminus_upper, check_burkholder_p, check_corollary_c, check_davis_properties, check_dual_doob,
    check_gundy_properties, check_regular_diagonal, check_theorem_a, check_theorem_b, positive_parts,
    proof_trace_theorem_a, proof_trace_theorem_b, theorems::absolute_differences, Cap, CapProvenance, CapsTable,
    RatioReport, TheoremBVariant,
};

/// Largest number of thresholds tried per instance.
const MAX_LAMBDAS: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteCheck {
    TheoremA,
    TheoremAKrickeberg,
    TheoremB,
    RegularDiagonal,
    CorollaryC,
    Burkholder,
    Bminus,
    Gundy,
    Davis,
    DualDoob,
    TraceA,
    TraceB,
}

impl SuiteCheck {
    pub const ALL: [SuiteCheck; 12] = [
        Self::TheoremA,
        Self::TheoremAKrickeberg,
        Self::TheoremB,
        Self::RegularDiagonal,
        Self::CorollaryC,
        Self::Burkholder,
        Self::Bminus,
        Self::Gundy,
        Self::Davis,
        Self::DualDoob,
        Self::TraceA,
        Self::TraceB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::TheoremA => "theorem_a",
            Self::TheoremAKrickeberg => "theorem_a_krickeberg",
            Self::TheoremB => "theorem_b",
            Self::RegularDiagonal => "regular_diagonal",
            Self::CorollaryC => "corollary_c",
            Self::Burkholder => "burkholder",
            Self::Bminus => "bminus",
            Self::Gundy => "gundy",
            Self::Davis => "davis",
            Self::DualDoob => "dual_doob",
            Self::TraceA => "trace_a",
            Self::TraceB => "trace_b",
        }
    }
}

impl FromStr for SuiteCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub checks: Vec<SuiteCheck>,
    /// Exponents for the `L_p` checks; each check keeps the ones in its range.
    pub p_values: Vec<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { checks: SuiteCheck::ALL.to_vec(), p_values: vec![1.0, 1.5, 2.0, 3.0, 4.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub instance: usize,
    pub id: String,
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub cap: Cap,
    pub pass: bool,
}

impl SuiteRow {
    fn from_report(instance: usize, r: RatioReport) -> Self {
        Self { instance, id: r.id, lambda: r.lambda, lhs: r.lhs, rhs: r.rhs, ratio: r.ratio, cap: r.cap, pass: r.pass }
    }

    pub fn provenance(&self) -> CapProvenance {
        self.cap.provenance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub id: String,
    pub count: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub worst_instance: Option<usize>,
    pub worst_lambda: Option<f64>,
    pub cap: Cap,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
    pub summaries: Vec<CheckSummary>,
}

impl SuiteReport {
    fn new(rows: Vec<SuiteRow>) -> Self {
        let mut groups: BTreeMap<&str, Vec<&SuiteRow>> = BTreeMap::new();
        for r in &rows {
            groups.entry(r.id.as_str()).or_default().push(r);
        }
        let summaries = groups
            .into_iter()
            .map(|(id, rs)| {
                // first row wins ties, rows are in instance order
                let worst = rs.iter().fold(rs[0], |w, r| if r.ratio > w.ratio { r } else { w });
                let mut ratios: Vec<f64> = rs.iter().map(|r| r.ratio).collect();
                ratios.sort_by(f64::total_cmp);
                CheckSummary {
                    id: id.to_string(),
                    count: rs.len(),
                    max_ratio: worst.ratio,
                    median_ratio: ratios[ratios.len() / 2],
                    worst_instance: Some(worst.instance),
                    worst_lambda: worst.lambda,
                    cap: worst.cap,
                    failures: rs.iter().filter(|r| !r.pass).count(),
                }
            })
            .collect();
        Self { rows, summaries }
    }

    pub fn summary(&self, id: &str) -> Option<&CheckSummary> {
        self.summaries.iter().find(|s| s.id == id)
    }

    /// Rows violating a constant that is explicit in a proof.
    pub fn paper_failures(&self) -> Vec<&SuiteRow> {
        self.rows.iter().filter(|r| !r.pass && r.cap.provenance == CapProvenance::PaperConstant).collect()
    }

    pub fn failures(&self) -> Vec<&SuiteRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }
}

/// Powers of two covering `[min positive f_k^*, max f_N^*]`, at most
/// `MAX_LAMBDAS` of them (the largest kept). `[1]` for `f ≡ 0`.
pub fn dyadic_lambdas(f: &Martingale) -> Vec<f64> {
    let star = f.maximal_all();
    let lo = star.iter().flat_map(|s| s.values().iter().copied()).filter(|v| *v > 0.0).fold(f64::INFINITY, f64::min);
    let hi = star.last().expect("depth ≥ 1").max_abs();
    if !lo.is_finite() || hi <= 0.0 {
        return vec![1.0];
    }
    let top = hi.log2().ceil() as i32;
    let bottom = (lo.log2().floor() as i32).max(top - MAX_LAMBDAS as i32 + 1);
    (bottom..=top).map(|j| 2f64.powi(j)).collect()
}

fn trace_rows(instance: usize, f: &Martingale, which: SuiteCheck) -> Result<Vec<SuiteRow>> {
    let (prefix, run): (&str, fn(&Martingale, f64) -> Result<crate::verify::ProofTrace>) = match which {
        SuiteCheck::TraceA => ("trace_a", proof_trace_theorem_a),
        _ => ("trace_b", proof_trace_theorem_b),
    };
    let mut rows = Vec::new();
    for part in positive_parts(f) {
        for lambda in dyadic_lambdas(&part) {
            for e in run(&part, lambda)?.entries {
                rows.push(SuiteRow {
                    instance,
                    id: format!("{prefix}/{}", e.name),
                    lambda: Some(lambda),
                    lhs: e.value,
                    rhs: e.scale,
                    ratio: e.ratio(),
                    cap: Cap::paper(e.constant),
                    pass: e.pass,
                });
            }
        }
    }
    Ok(rows)
}

fn instance_rows(instance: usize, f: &Martingale, config: &SuiteConfig, caps: &CapsTable) -> Result<Vec<SuiteRow>> {
    let mut out: Vec<RatioReport> = Vec::new();
    let mut traces = Vec::new();
    let ps = &config.p_values;
    for &check in &config.checks {
        match check {
            SuiteCheck::TheoremA => out.push(check_theorem_a(f, false, caps)),
            SuiteCheck::TheoremAKrickeberg => out.push(check_theorem_a(f, true, caps)),
            SuiteCheck::TheoremB => {
                out.push(check_theorem_b(f, TheoremBVariant::Davis, caps));
                out.push(check_theorem_b(f, TheoremBVariant::Regular, caps));
            }
            SuiteCheck::RegularDiagonal => out.push(check_regular_diagonal(f)),
            SuiteCheck::CorollaryC => out.push(check_corollary_c(f, caps)),
            SuiteCheck::Burkholder => {
                for &p in ps.iter().filter(|p| **p >= 2.0) {
                    let (low, high) = check_burkholder_p(f, p, caps)?;
                    out.extend([low, high]);
                }
            }
            SuiteCheck::Bminus => {
                let pair = davis(f);
                for &p in ps.iter().filter(|p| **p > 1.0 && **p <= 2.0) {
                    out.push(check_bminus_upper(f, p, &pair, caps)?);
                }
            }
            SuiteCheck::Gundy => {
                for lambda in dyadic_lambdas(f) {
                    out.extend(check_gundy_properties(f, lambda, caps)?);
                }
            }
            SuiteCheck::Davis => {
                for &p in ps.iter().filter(|p| **p >= 1.0) {
                    let mut rs = check_davis_properties(f, p)?;
                    // (a) does not depend on p
                    if p != ps.iter().copied().find(|q| *q >= 1.0).unwrap_or(p) {
                        rs.retain(|r| r.id != "davis_a");
                    }
                    out.extend(rs);
                }
            }
            SuiteCheck::DualDoob => {
                let phi = absolute_differences(f);
                for &p in ps.iter().filter(|p| **p >= 1.0) {
                    out.push(check_dual_doob(f.tree(), &phi, p, caps)?);
                }
            }
            SuiteCheck::TraceA | SuiteCheck::TraceB => traces.extend(trace_rows(instance, f, check)?),
        }
    }
    let mut rows: Vec<SuiteRow> = out.into_iter().map(|r| SuiteRow::from_report(instance, r)).collect();
    rows.extend(traces);
    Ok(rows)
}

/// Runs `config` on the martingale instances; adapted-only instances are skipped.
pub fn run_suite_on(instances: &[Instance], config: &SuiteConfig, caps: &CapsTable) -> Result<SuiteReport> {
    let per: Vec<Result<Vec<SuiteRow>>> = parallel::map_slice(instances, |inst| match inst.martingale() {
        Ok(f) => instance_rows(inst.index, f, config, caps),
        Err(_) => Ok(Vec::new()),
    });
    let mut rows = Vec::new();
    for r in per {
        rows.extend(r?);
    }
    Ok(SuiteReport::new(rows))
}

pub fn run_suite(spec: &CorpusSpec, config: &SuiteConfig, caps: &CapsTable) -> Result<SuiteReport> {
    run_suite_on(&corpus(spec)?, config, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{GeneratorKind, ValueDistribution};

    fn spec(kind: GeneratorKind) -> CorpusSpec {
        CorpusSpec { kind, depth: 4, max_branching: 3, skew: 0.3, values: ValueDistribution::Gaussian, count: 6, seed: 5 }
    }

    #[test]
    fn no_paper_constant_is_violated() {
        for kind in [GeneratorKind::Dyadic, GeneratorKind::RandomTree, GeneratorKind::Rademacher] {
            let report = run_suite(&spec(kind), &SuiteConfig::default(), &CapsTable::default()).unwrap();
            assert!(report.paper_failures().is_empty(), "{kind:?}: {:?}", report.paper_failures());
            assert!(report.summary("theorem_a").is_some());
            assert!(report.summary("trace_a/Linfty").is_some());
            assert!(report.summary("davis_b[p=3]").is_some());
        }
    }

    #[test]
    fn calibration_round_trip() {
        let s = spec(GeneratorKind::RandomTree);
        let config = SuiteConfig { checks: vec![SuiteCheck::TheoremA, SuiteCheck::Gundy], ..Default::default() };
        let report = run_suite(&s, &config, &CapsTable::default()).unwrap();
        let caps = CapsTable::calibrate(&report, "test");
        assert!(caps.entries.contains_key("theorem_a"));
        assert!(!caps.entries.contains_key("gundy_i"));
        let again = run_suite(&s, &config, &caps).unwrap();
        assert!(again.failures().is_empty());
    }

    #[test]
    fn lambda_grid() {
        let f = crate::space::rademacher(&[1.0, 2.0]).unwrap();
        // f* ranges over {1, 3}
        assert_eq!(dyadic_lambdas(&f), vec![1.0, 2.0, 4.0]);
        assert_eq!(dyadic_lambdas(&f.scaled(0.0)), vec![1.0]);
        assert_eq!("trace_b".parse::<SuiteCheck>().unwrap(), SuiteCheck::TraceB);
        assert!("nope".parse::<SuiteCheck>().is_err());
    }
}
