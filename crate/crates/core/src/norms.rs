//! Norms and quasinorms on finite measure spaces.
//!
//! Functions are reduced to a [`WeightedValueMultiset`] of `(value, weight)`
//! pairs. A single adapted function gives total weight 1; the disjoint union
//! `Ω_⊕∞` of several copies of `Ω` gives total weight equal to the number of
//! copies, which is how the diagonal weak norm `sup_λ λ Σ_k μ{|h_k| > λ}` is
//! evaluated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{AdaptedFunction, FiltrationTree, Martingale};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedValueMultiset {
    pairs: Vec<(f64, f64)>,
}

impl WeightedValueMultiset {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for (atom, &(v, w)) in pairs.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { level: 0, atom });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight { index: atom, weight: w });
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn total_weight(&self) -> f64 {
        self.pairs.iter().map(|p| p.1).sum()
    }

    pub fn extend(&mut self, other: &Self) {
        self.pairs.extend_from_slice(&other.pairs);
    }

    /// Total weight of `{|v| > λ}`.
    pub fn tail_weight(&self, lambda: f64) -> f64 {
        self.pairs.iter().filter(|(v, _)| v.abs() > lambda).map(|p| p.1).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "functional", content = "p")]
pub enum NormKind {
    Lp(f64),
    Weak,
    DiagonalWeak,
    ConditionalSquare,
    PVariation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub kind: NormKind,
}

/// First-difference convention for the conditional square function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CsfMode {
    /// `E_0 = E_1` for the first term: contributes `|df_1|²` pointwise.
    #[default]
    Paper,
    /// The first term is the scalar `E|df_1|²`.
    Trivial,
}

impl std::str::FromStr for CsfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "trivial" => Ok(Self::Trivial),
            other => Err(Error::InvalidParameters(format!("unknown csf mode `{other}`"))),
        }
    }
}

/// One `(value, μ(atom))` pair per atom of `g`'s level.
pub fn to_multiset(tree: &FiltrationTree, g: &AdaptedFunction) -> WeightedValueMultiset {
    WeightedValueMultiset {
        pairs: g.values().iter().copied().zip(tree.measures(g.level()).iter().copied()).collect(),
    }
}

/// Concatenation of the multisets of each term; weights are not renormalised.
pub fn diagonal_multiset(tree: &FiltrationTree, terms: &[AdaptedFunction]) -> WeightedValueMultiset {
    let mut out = WeightedValueMultiset::default();
    for t in terms {
        out.extend(&to_multiset(tree, t));
    }
    out
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::BadExponent(p))
    }
}

/// `(Σ w |v|^p)^{1/p}`, or `max |v|` for `p = ∞`.
pub fn lp_norm(m: &WeightedValueMultiset, p: f64) -> Result<NormValue> {
    check_exponent(p)?;
    let value = if p.is_infinite() {
        m.pairs.iter().fold(0.0_f64, |acc, (v, _)| acc.max(v.abs()))
    } else if p == 1.0 {
        m.pairs.iter().map(|(v, w)| w * v.abs()).sum()
    } else if p == 2.0 {
        m.pairs.iter().map(|(v, w)| w * v * v).sum::<f64>().sqrt()
    } else {
        m.pairs.iter().map(|(v, w)| w * v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    };
    Ok(NormValue { value, kind: NormKind::Lp(p) })
}

/// `sup_{λ>0} λ W{|v| > λ}`, exactly.
///
/// Between consecutive distinct values `λ ↦ λ W{|v| > λ}` is increasing, so
/// the supremum is the maximum over distinct `|v| > 0` of
/// `|v| · W{|·| ≥ |v|}`, approached from below each breakpoint.
pub fn weak_l1_norm(m: &WeightedValueMultiset) -> NormValue {
    NormValue { value: weak_sweep(m).0, kind: NormKind::Weak }
}

/// Weak norm together with the maximising breakpoint `|v|` (0 if none).
pub fn weak_sweep(m: &WeightedValueMultiset) -> (f64, f64) {
    let mut abs: Vec<(f64, f64)> = m.pairs.iter().map(|&(v, w)| (v.abs(), w)).filter(|p| p.0 > 0.0).collect();
    abs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = (0.0, 0.0);
    // Neumaier-compensated running weight; diagonal unions can hold ~10^6 atoms
    let (mut acc, mut carry) = (0.0_f64, 0.0_f64);
    let mut i = 0;
    while i < abs.len() {
        let v = abs[i].0;
        while i < abs.len() && abs[i].0 == v {
            let w = abs[i].1;
            let t = acc + w;
            carry += if acc.abs() >= w.abs() { (acc - t) + w } else { (w - t) + acc };
            acc = t;
            i += 1;
        }
        let candidate = v * (acc + carry);
        if candidate > best.0 {
            best = (candidate, v);
        }
    }
    best
}

/// `sup_λ λ Σ_k μ{|h_k| > λ}` over the disjoint union of the terms.
pub fn diagonal_weak_norm(tree: &FiltrationTree, terms: &[AdaptedFunction]) -> NormValue {
    NormValue { value: weak_sweep(&diagonal_multiset(tree, terms)).0, kind: NormKind::DiagonalWeak }
}

/// `‖g‖_p` for a single adapted function.
pub fn norm(tree: &FiltrationTree, g: &AdaptedFunction, p: f64) -> Result<f64> {
    Ok(lp_norm(&to_multiset(tree, g), p)?.value)
}

/// `‖g‖_{1,∞}` for a single adapted function.
pub fn weak_norm(tree: &FiltrationTree, g: &AdaptedFunction) -> f64 {
    weak_sweep(&to_multiset(tree, g)).0
}

/// `(Σ_k E_{k−1}|d_k|²)^{1/2}` for a sequence `d_1..d_N` with `d_k` at level `k`,
/// returned on the leaf level.
pub fn conditional_square_function_of(
    tree: &FiltrationTree,
    diffs: &[AdaptedFunction],
    mode: CsfMode,
) -> Result<AdaptedFunction> {
    let depth = tree.depth();
    let mut acc = vec![0.0; tree.leaf_count()];
    for (i, d) in diffs.iter().enumerate() {
        let k = i + 1;
        if d.level() != k {
            return Err(Error::LevelMismatch { left: d.level(), right: k });
        }
        let sq = d.map(|v| v * v);
        let term = if k == 1 && mode == CsfMode::Paper { sq } else { tree.conditional_expectation(&sq, k - 1)? };
        for (a, v) in acc.iter_mut().zip(tree.on_leaves(&term)) {
            *a += v;
        }
    }
    AdaptedFunction::new(tree, depth, acc.into_iter().map(f64::sqrt).collect())
}

/// Conditional square function `s(f)` on the leaf level.
pub fn conditional_square_function(f: &Martingale, mode: CsfMode) -> AdaptedFunction {
    conditional_square_function_of(f.tree(), &f.differences(), mode).expect("martingale differences are adapted")
}

/// `(Σ_k |d_k|^p)^{1/p}` pointwise on the leaves; `d_k` may live on any level.
pub fn p_variation(tree: &FiltrationTree, diffs: &[AdaptedFunction], p: f64) -> Result<AdaptedFunction> {
    check_exponent(p)?;
    let mut acc = vec![0.0; tree.leaf_count()];
    for d in diffs {
        for (a, v) in acc.iter_mut().zip(tree.on_leaves(d)) {
            *a += if p == 1.0 { v.abs() } else { v.abs().powf(p) };
        }
    }
    let values = if p.is_infinite() {
        let mut sup = vec![0.0_f64; tree.leaf_count()];
        for d in diffs {
            for (s, v) in sup.iter_mut().zip(tree.on_leaves(d)) {
                *s = s.max(v.abs());
            }
        }
        sup
    } else if p == 1.0 {
        acc
    } else {
        acc.into_iter().map(|a| a.powf(1.0 / p)).collect()
    };
    AdaptedFunction::new(tree, tree.depth(), values)
}

/// `H_m = Σ_{k ≤ m} 1/k`.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).rev().map(|k| 1.0 / k as f64).sum()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::space::{phi_family, rademacher, xi_family};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn lp_examples() {
        let t = FiltrationTree::uniform(2, 2).unwrap();
        let chi = AdaptedFunction::new(&t, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(norm(&t, &chi, 2.0).unwrap(), 0.5, 1e-15));
        let g = AdaptedFunction::new(&t, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(close(norm(&t, &g, 1.0).unwrap(), 2.5, 1e-15));
        let m = WeightedValueMultiset::new(vec![(1.0, 0.3), (-5.0, 0.3), (2.0, 0.4)]).unwrap();
        assert_eq!(lp_norm(&m, f64::INFINITY).unwrap().value, 5.0);
        assert!(matches!(lp_norm(&m, 0.5), Err(Error::BadExponent(_))));
    }

    #[test]
    fn multiset_of_indicator() {
        let t = FiltrationTree::uniform(2, 2).unwrap();
        let chi = AdaptedFunction::new(&t, 1, vec![1.0, 0.0]).unwrap();
        let m = to_multiset(&t, &chi);
        assert_eq!(m.pairs(), &[(1.0, 0.5), (0.0, 0.5)]);
        assert!(close(m.total_weight(), 1.0, 1e-15));
        assert!(close(weak_l1_norm(&m).value, 0.5, 1e-15));
    }

    #[test]
    fn weak_norm_groups_ties() {
        let m = WeightedValueMultiset::new(vec![(2.0, 0.25), (-2.0, 0.25), (1.0, 0.5)]).unwrap();
        // λ ↑ 2: 2 · 0.5 = 1; λ ↑ 1: 1 · 1 = 1
        assert!(close(weak_l1_norm(&m).value, 1.0, 1e-15));
        let m = WeightedValueMultiset::new(vec![(3.0, 0.25), (1.0, 0.75)]).unwrap();
        assert!(close(weak_l1_norm(&m).value, 1.0, 1e-15));
        assert_eq!(weak_l1_norm(&WeightedValueMultiset::default()).value, 0.0);
    }

    #[test]
    fn phi_and_xi_families_swap_roles() {
        for m in [2usize, 10, 100] {
            let h = harmonic(m);
            let phi = phi_family(m).unwrap();
            let sum = phi.terms.iter().skip(1).fold(phi.terms[0].clone(), |a, b| a.zip_with(b, |x, y| x + y).unwrap());
            assert!(close(weak_norm(&phi.tree, &sum), 1.0, 1e-12));
            assert!(close(diagonal_weak_norm(&phi.tree, &phi.terms).value, h, 1e-12));

            let xi = xi_family(m).unwrap();
            let sum = xi.terms.iter().skip(1).fold(xi.terms[0].clone(), |a, b| a.zip_with(b, |x, y| x + y).unwrap());
            assert!(close(weak_norm(&xi.tree, &sum), h, 1e-12));
            assert!(close(diagonal_weak_norm(&xi.tree, &xi.terms).value, 1.0, 1e-12));
        }
        assert!(close(harmonic(100), 5.187377517639621, 1e-14));
    }

    #[test]
    fn diagonal_of_single_function_is_its_multiset() {
        let t = FiltrationTree::uniform(2, 2).unwrap();
        let g = AdaptedFunction::new(&t, 2, vec![1.0, -2.0, 0.5, 4.0]).unwrap();
        assert_eq!(diagonal_multiset(&t, std::slice::from_ref(&g)), to_multiset(&t, &g));
    }

    #[test]
    fn csf_of_rademacher_is_constant() {
        let f = rademacher(&[3.0, 4.0]).unwrap();
        for mode in [CsfMode::Paper, CsfMode::Trivial] {
            let s = conditional_square_function(&f, mode);
            assert!(s.values().iter().all(|&v| close(v, 5.0, 1e-15)));
        }
        let c = Martingale::from_terminal(
            Arc::clone(f.tree()),
            AdaptedFunction::constant(f.tree(), 2, 1.0),
        )
        .unwrap();
        assert!(conditional_square_function(&c, CsfMode::Paper).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn p_variation_examples() {
        let t = FiltrationTree::uniform(2, 2).unwrap();
        let d1 = AdaptedFunction::new(&t, 1, vec![-1.0, 1.0]).unwrap();
        let d2 = AdaptedFunction::new(&t, 2, vec![-0.5, 0.5, -0.5, 0.5]).unwrap();
        let v = p_variation(&t, &[d1.clone(), d2], 1.0).unwrap();
        assert_eq!(v.values(), &[1.5, 1.5, 1.5, 1.5]);
        let zero = AdaptedFunction::zeros(&t, 2);
        let single = p_variation(&t, &[d1, zero], 3.0).unwrap();
        assert!(single.values().iter().all(|&x| close(x, 1.0, 1e-15)));
        assert!(p_variation(&t, &[], 0.9).is_err());
    }
}
