//! Ratio checks for the weak-type decomposition statements and the Davis
//! and Gundy properties.

use serde::{Deserialize, Serialize};

use crate::decomp::{corollary_c_split, davis, gundy, krickeberg, regular_davis, MartingalePair};
use crate::error::{Error, Result};
use crate::norms::{
    conditional_square_function, conditional_square_function_of, diagonal_weak_norm, norm, p_variation, weak_norm,
    CsfMode,
};
use crate::space::{regularity_constant, AdaptedFunction, FiltrationTree, Martingale};
use crate::verify::{Cap, CapsTable, RatioReport};

/// `‖s(g)‖_{1,∞} + ‖Σ|dh_k|‖_{1,∞}` for the Davis decomposition of `f`.
pub fn theorem_a_lhs(f: &Martingale, mode: CsfMode) -> f64 {
    pair_lhs_one_variation(f.tree(), &davis(f), mode)
}

fn pair_lhs_one_variation(tree: &FiltrationTree, pair: &MartingalePair, mode: CsfMode) -> f64 {
    let s = conditional_square_function(&pair.g, mode);
    let v = p_variation(tree, &pair.dh(), 1.0).expect("p = 1");
    weak_norm(tree, &s) + weak_norm(tree, &v)
}

fn pair_lhs_diagonal(tree: &FiltrationTree, pair: &MartingalePair, mode: CsfMode) -> f64 {
    let s = conditional_square_function(&pair.g, mode);
    weak_norm(tree, &s) + diagonal_weak_norm(tree, &pair.dh()).value
}

/// Theorem A ratio `lhs / ‖f‖_1`. With `krickeberg`, the left side is the
/// sum over the positive and negative parts of `f`.
pub fn check_theorem_a(f: &Martingale, krickeberg_parts: bool, caps: &CapsTable) -> RatioReport {
    let mode = CsfMode::default();
    let (id, lhs) = if krickeberg_parts {
        let (p, n) = krickeberg(f);
        ("theorem_a_krickeberg", theorem_a_lhs(&p, mode) + theorem_a_lhs(&n, mode))
    } else {
        ("theorem_a", theorem_a_lhs(f, mode))
    };
    RatioReport::new(id, lhs, f.l1_norm(), caps.cap(id))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremBVariant {
    Davis,
    /// The regular-filtration split at `k = regularity_constant`; signed `f`
    /// is split into its positive parts first.
    Regular,
}

/// `‖s(g)‖_{1,∞} + ‖(dh_k)‖_{L_{1,∞}(Ω_⊕∞)}` for the chosen decomposition.
pub fn theorem_b_lhs(f: &Martingale, variant: TheoremBVariant, mode: CsfMode) -> f64 {
    let tree = f.tree();
    match variant {
        TheoremBVariant::Davis => pair_lhs_diagonal(tree, &davis(f), mode),
        TheoremBVariant::Regular => {
            let k = regularity_constant(tree);
            regular_parts(f, k).iter().map(|pair| pair_lhs_diagonal(tree, pair, mode)).sum()
        }
    }
}

fn regular_parts(f: &Martingale, k: f64) -> Vec<MartingalePair> {
    let parts = if f.is_nonnegative() {
        vec![f.clone()]
    } else {
        let (p, n) = krickeberg(f);
        vec![p, n]
    };
    parts.iter().map(|g| regular_davis(g, k).expect("non-negative parts, k ≥ 1")).collect()
}

/// Theorem B ratio `lhs / (k ‖f‖_1)` with `k` the regularity constant.
pub fn check_theorem_b(f: &Martingale, variant: TheoremBVariant, caps: &CapsTable) -> RatioReport {
    let id = match variant {
        TheoremBVariant::Davis => "theorem_b_davis",
        TheoremBVariant::Regular => "theorem_b_regular",
    };
    let k = regularity_constant(f.tree());
    RatioReport::new(id, theorem_b_lhs(f, variant, CsfMode::default()), k * f.l1_norm(), caps.cap(id))
}

/// Diagonal term of the regular split against `4‖f‖_1`.
pub fn check_regular_diagonal(f: &Martingale) -> RatioReport {
    let tree = f.tree();
    let k = regularity_constant(tree);
    let lhs = regular_parts(f, k).iter().map(|pair| diagonal_weak_norm(tree, &pair.dh()).value).sum();
    RatioReport::new("regular_diagonal", lhs, f.l1_norm(), Cap::paper(4.0))
}

/// Same functional as Theorem B on the uncentred split.
pub fn corollary_c_lhs(f: &Martingale, mode: CsfMode) -> f64 {
    let tree = f.tree();
    let split = corollary_c_split(f);
    let s = conditional_square_function_of(tree, &split.dg, mode).expect("levels 1..N");
    weak_norm(tree, &s) + diagonal_weak_norm(tree, &split.dh).value
}

pub fn check_corollary_c(f: &Martingale, caps: &CapsTable) -> RatioReport {
    RatioReport::new("corollary_c", corollary_c_lhs(f, CsfMode::default()), f.l1_norm(), caps.cap("corollary_c"))
}

/// Gundy properties at `λ`: `(i)` against the Doob constant 1, `(ii-a)`,
/// `(ii-b)` and `(iii)` against calibrated caps.
pub fn check_gundy_properties(f: &Martingale, lambda: f64, caps: &CapsTable) -> Result<Vec<RatioReport>> {
    let tree = f.tree();
    let triple = gundy(f, lambda)?;
    let norm_f = f.l1_norm();

    let mut support = vec![false; tree.leaf_count()];
    for d in triple.alpha.differences() {
        for (s, v) in support.iter_mut().zip(tree.on_leaves(&d)) {
            *s |= v != 0.0;
        }
    }
    let leaf_mu = tree.measures(tree.depth());
    let alpha_support: f64 = support.iter().zip(leaf_mu).filter(|(s, _)| **s).map(|(_, w)| w).sum();

    let beta_n = triple.beta.terminal();
    let beta_l1 = norm(tree, beta_n, 1.0)?;
    let beta_l2 = norm(tree, beta_n, 2.0)?;
    let gamma_l1: f64 = triple.gamma.differences().iter().map(|d| tree.integrate(&d.abs())).sum();

    let report = |id: &str, lhs: f64, cap: Cap| RatioReport::new(id, lhs, norm_f, cap).with_lambda(lambda);
    Ok(vec![
        report("gundy_i", lambda * alpha_support, Cap::paper(1.0)),
        report("gundy_iia", beta_l1, caps.cap("gundy_iia")),
        report("gundy_iib", beta_l2 * beta_l2 / lambda, caps.cap("gundy_iib")),
        report("gundy_iii", gamma_l1, caps.cap("gundy_iii")),
    ])
}

/// `(a)` `max |dg_k| / f_{k−1}^*` against 8 and `(b)` `‖Σ|dh_k|‖_p / ‖f^*‖_p`
/// against `4 + 4p`.
pub fn check_davis_properties(f: &Martingale, p: f64) -> Result<Vec<RatioReport>> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    let tree = f.tree();
    let pair = davis(f);
    let star = f.maximal_all();
    let mut worst = 0.0_f64;
    for (i, dg) in pair.dg().iter().enumerate() {
        let k = i + 1;
        let prev = tree.broadcast(&star[k - 1], k)?;
        for (x, m) in dg.values().iter().zip(prev.values()) {
            if *m > 0.0 {
                worst = worst.max(x.abs() / m);
            } else if *x != 0.0 {
                worst = f64::INFINITY;
            }
        }
    }
    let variation = p_variation(tree, &pair.dh(), 1.0)?;
    let lhs = norm(tree, &variation, p)?;
    let rhs = norm(tree, star.last().expect("depth ≥ 1"), p)?;
    Ok(vec![
        RatioReport::new("davis_a", worst, 1.0, Cap::paper(8.0)),
        RatioReport::new(format!("davis_b[p={p}]"), lhs, rhs, Cap::paper(4.0 + 4.0 * p)),
    ])
}

/// `|df_k|` for `k = 1..N`: the non-negative sequence fed to the dual Doob check.
pub fn absolute_differences(f: &Martingale) -> Vec<AdaptedFunction> {
    f.differences().iter().map(AdaptedFunction::abs).collect()
}
