//! The two classical counterexamples: the φ/ξ families separating the two
//! weak-ℓ_1 quasinorms, and Cwikel's function outside `L_p(ℓ_p)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{diagonal_weak_norm, weak_norm};
use crate::space::{phi_family, xi_family, AdaptedFunction, AdaptedSequence};

/// The four weak norms of the introduction display.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub m: usize,
    /// `sup λ μ{Σ φ_k > λ}`.
    pub phi_sum: f64,
    /// `sup λ Σ μ{φ_k > λ}`.
    pub phi_diagonal: f64,
    pub xi_sum: f64,
    pub xi_diagonal: f64,
}

impl CounterexampleReport {
    pub fn as_tuple(&self) -> (f64, f64, f64, f64) {
        (self.phi_sum, self.phi_diagonal, self.xi_sum, self.xi_diagonal)
    }
}

fn sum_and_diagonal(family: &AdaptedSequence) -> (f64, f64) {
    let tree = &family.tree;
    let level = family.terms[0].level();
    let mut total = vec![0.0; family.terms[0].values().len()];
    for t in &family.terms {
        for (a, v) in total.iter_mut().zip(t.values()) {
            *a += v;
        }
    }
    let total = AdaptedFunction::new(tree, level, total).expect("same level");
    (weak_norm(tree, &total), diagonal_weak_norm(tree, &family.terms).value)
}

/// Evaluates all four quantities on the `m`-term families; exact values are
/// `(1, H_m, H_m, 1)`.
pub fn counterexample_report(m: usize) -> Result<CounterexampleReport> {
    if m < 2 {
        return Err(Error::InvalidParameters(format!("counterexample needs m >= 2, got {m}")));
    }
    let (phi_sum, phi_diagonal) = sum_and_diagonal(&phi_family(m)?);
    let (xi_sum, xi_diagonal) = sum_and_diagonal(&xi_family(m)?);
    Ok(CounterexampleReport { m, phi_sum, phi_diagonal, xi_sum, xi_diagonal })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CwikelRow {
    pub k_max: usize,
    /// `‖f_1‖_{A_0}` for `f_1 = χ_S` truncated at `k_max`.
    pub a0_norm_f1: f64,
    /// `‖f_2‖_{A_1}² = Σ_{k ≤ K} 1/(k (1 + log k)^{2α})`.
    pub a1_sum: f64,
    /// `‖f_2‖_{L_p(ℓ_p)}^p = Σ_{k ≤ K} 1/(k (1 + log k)^{pα})`.
    pub lp_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CwikelReport {
    pub p: f64,
    pub alpha: f64,
    pub rows: Vec<CwikelRow>,
}

/// Partial sums at each truncation in `ks` (natural logarithm).
///
/// On `w ∈ (1/(j+1), 1/j]` the truncated `Σ_k χ_{S_k}(w, ·)` equals
/// `min(j, K)`, so `{Σ_k f_1 > λ} = [0, 1/⌈λ⌉]` for `λ < K` and the weak norm
/// is the supremum of `j · (1/j)`.
pub fn cwikel_report(p: f64, alpha: f64, ks: &[usize]) -> Result<CwikelReport> {
    if !(p > 1.0 && p < 2.0 && p * alpha < 1.0 && 2.0 * alpha > 1.0) {
        return Err(Error::InvalidParameters(format!("need 1 < p < 2 and pα < 1 < 2α, got p = {p}, α = {alpha}")));
    }
    if ks.contains(&0) {
        return Err(Error::InvalidParameters("truncation K must be >= 1".into()));
    }
    let mut order: Vec<usize> = ks.to_vec();
    order.sort_unstable();
    let k_top = order.last().copied().unwrap_or(0);

    let mut rows = Vec::with_capacity(ks.len());
    let (mut a1, mut lp, mut a0) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut next = order.iter().peekable();
    for k in 1..=k_top {
        let kf = k as f64;
        let log = 1.0 + kf.ln();
        a1 += 1.0 / (kf * log.powf(2.0 * alpha));
        lp += 1.0 / (kf * log.powf(p * alpha));
        a0 = a0.max(kf * (1.0 / kf));
        while next.peek() == Some(&&k) {
            next.next();
            rows.push(CwikelRow { k_max: k, a0_norm_f1: a0, a1_sum: a1, lp_sum: lp });
        }
    }
    // back to the caller's order
    let rows = ks.iter().map(|k| *rows.iter().find(|r| r.k_max == *k).expect("every k visited")).collect();
    Ok(CwikelReport { p, alpha, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::harmonic;

    #[test]
    fn separation_table() {
        let r = counterexample_report(2).unwrap();
        assert_eq!(r.as_tuple(), (1.0, 1.5, 1.5, 1.0));
        for m in [10, 100] {
            let r = counterexample_report(m).unwrap();
            let h = harmonic(m);
            assert!((r.phi_sum - 1.0).abs() < 1e-12);
            assert!((r.phi_diagonal - h).abs() < 1e-12);
            assert!((r.xi_sum - h).abs() < 1e-12);
            assert!((r.xi_diagonal - 1.0).abs() < 1e-12);
        }
        assert!((harmonic(10) - 2.928968253968254).abs() < 1e-14);
        assert!(counterexample_report(1).is_err());
    }

    #[test]
    fn cwikel_partial_sums() {
        let r = cwikel_report(1.5, 0.6, &[1000, 10, 1]).unwrap();
        assert_eq!(r.rows[2].k_max, 1);
        assert_eq!(r.rows[2].a1_sum, 1.0);
        assert!(r.rows.iter().all(|row| row.a0_norm_f1 == 1.0));
        assert!(r.rows[0].lp_sum > r.rows[1].lp_sum);
        assert!(cwikel_report(1.5, 0.7, &[10]).is_err());
        assert!(cwikel_report(2.5, 0.3, &[10]).is_err());
        assert!(cwikel_report(1.5, 0.6, &[0]).is_err());
    }
}
