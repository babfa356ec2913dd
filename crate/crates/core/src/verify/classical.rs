//! Strong-type inequalities: Burkholder in both ranges, dual Doob,
//! Khintchine and Rosenthal.

use crate::decomp::MartingalePair;
use crate::error::{Error, Result};
use crate::norms::{conditional_square_function, norm, p_variation, CsfMode};
use crate::space::{product_martingale, rademacher, AdaptedFunction, DiscreteVariable, FiltrationTree, Martingale};
use crate::verify::{Cap, CapsTable, RatioReport};

/// `‖f_N − f_0‖_p` against `‖s(f)‖_p + ‖(Σ|df_k|^p)^{1/p}‖_p` for `p ≥ 2`.
///
/// Returns `(low, high)`: `low = ‖f‖_p / RHS` and `high = RHS / ‖f‖_p`.
pub fn check_burkholder_p(f: &Martingale, p: f64, caps: &CapsTable) -> Result<(RatioReport, RatioReport)> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    let tree = f.tree();
    let centered = f.centered();
    let lhs = norm(tree, centered.terminal(), p)?;
    let s = conditional_square_function(f, CsfMode::default());
    let v = p_variation(tree, &f.differences(), p)?;
    let rhs = norm(tree, &s, p)? + norm(tree, &v, p)?;
    let low = format!("burkholder_low[p={p}]");
    let high = format!("burkholder_high[p={p}]");
    Ok((RatioReport::new(low.as_str(), lhs, rhs, caps.cap(&low)), RatioReport::new(high.as_str(), rhs, lhs, caps.cap(&high))))
}

/// `‖s(g)‖_p + ‖(Σ|dh_k|^p)^{1/p}‖_p` for a decomposition of `f`, `p ∈ (1, 2]`.
pub fn bminus_value(f: &Martingale, p: f64, pair: &MartingalePair) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::BadExponent(p));
    }
    pair.check_decomposes(f)?;
    let tree = f.tree();
    let s = conditional_square_function(&pair.g, CsfMode::default());
    let v = p_variation(tree, &pair.dh(), p)?;
    Ok(norm(tree, &s, p)? + norm(tree, &v, p)?)
}

/// The bracket of the lower Burkholder inequality for one decomposition,
/// over `‖f_N − f_0‖_p`. An upper bound for the infimum over decompositions.
pub fn check_bminus_upper(f: &Martingale, p: f64, pair: &MartingalePair, caps: &CapsTable) -> Result<RatioReport> {
    let value = bminus_value(f, p, pair)?;
    let rhs = norm(f.tree(), f.centered().terminal(), p)?;
    let id = format!("bminus[p={p}]");
    Ok(RatioReport::new(id.as_str(), value, rhs, caps.cap(&id)))
}

/// `‖Σ_m E_{m−1} φ_m‖_p / ‖Σ_m φ_m‖_p` for non-negative `φ_m` at level `m`.
///
/// At `p = 1` both sides integrate the same function and the cap is 1.
pub fn check_dual_doob(tree: &FiltrationTree, phi: &[AdaptedFunction], p: f64, caps: &CapsTable) -> Result<RatioReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    let mut projected = vec![0.0; tree.leaf_count()];
    let mut plain = vec![0.0; tree.leaf_count()];
    for (i, g) in phi.iter().enumerate() {
        let m = i + 1;
        if g.level() != m {
            return Err(Error::LevelMismatch { left: g.level(), right: m });
        }
        let min = g.min_value();
        if min < 0.0 {
            return Err(Error::NegativeInput { level: m, value: min, hint: "dual Doob needs non-negative terms" });
        }
        let e = tree.conditional_expectation(g, m - 1)?;
        for (a, v) in projected.iter_mut().zip(tree.on_leaves(&e)) {
            *a += v;
        }
        for (a, v) in plain.iter_mut().zip(tree.on_leaves(g)) {
            *a += v;
        }
    }
    let depth = tree.depth();
    let lhs = norm(tree, &AdaptedFunction::new(tree, depth, projected)?, p)?;
    let rhs = norm(tree, &AdaptedFunction::new(tree, depth, plain)?, p)?;
    let id = format!("dual_doob[p={p}]");
    let cap = if p == 1.0 { Cap::paper(1.0) } else { caps.cap(&id) };
    Ok(RatioReport::new(id.as_str(), lhs, rhs, cap))
}

/// `‖Σ λ_k ε_k‖_p / (Σ λ_k²)^{1/2}`.
pub fn check_khintchine(lambdas: &[f64], p: f64, caps: &CapsTable) -> Result<RatioReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    let f = rademacher(lambdas)?;
    let lhs = norm(f.tree(), f.terminal(), p)?;
    let rhs = lambdas.iter().map(|l| l * l).sum::<f64>().sqrt();
    let id = format!("khintchine[p={p}]");
    Ok(RatioReport::new(id.as_str(), lhs, rhs, caps.cap(&id)))
}

/// Recovers independent coordinates from a martingale on a product tree.
///
/// Every atom of level `k − 1` must split into children with the same
/// conditional probabilities, carrying the same increments `df_k`.
pub fn product_variables(f: &Martingale) -> Result<Vec<DiscreteVariable>> {
    let tree = f.tree();
    let diffs = f.differences();
    let scale = diffs.iter().map(AdaptedFunction::max_abs).fold(1.0, f64::max);
    let mut vars = Vec::with_capacity(f.depth());
    for k in 1..=f.depth() {
        let up = tree.measures(k - 1);
        let mu = tree.measures(k);
        let d = diffs[k - 1].values();
        let mut law: Option<DiscreteVariable> = None;
        for parent in 0..tree.atom_count(k - 1) {
            let kids = tree.children(k - 1, parent);
            let here = DiscreteVariable {
                values: kids.iter().map(|&c| d[c]).collect(),
                probabilities: kids.iter().map(|&c| mu[c] / up[parent]).collect(),
            };
            match &law {
                None => law = Some(here),
                Some(first) => {
                    let same = first.values.len() == here.values.len()
                        && first.values.iter().zip(&here.values).all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
                        && first.probabilities.iter().zip(&here.probabilities).all(|(a, b)| (a - b).abs() <= 1e-12);
                    if !same {
                        return Err(Error::NonProduct { level: k });
                    }
                }
            }
        }
        vars.push(law.expect("non-empty level"));
    }
    Ok(vars)
}

/// `‖Σ ξ_k‖_p` against `(Σ‖ξ_k‖_2²)^{1/2} + (Σ‖ξ_k‖_p^p)^{1/p}` for the
/// independent increments of a product martingale.
pub fn check_rosenthal(f: &Martingale, p: f64, caps: &CapsTable) -> Result<RatioReport> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    let vars = product_variables(f)?;
    let lhs = norm(f.tree(), f.centered().terminal(), p)?;
    let l2: f64 = vars.iter().map(|v| v.moment(2.0)).sum::<f64>().sqrt();
    let lp: f64 = vars.iter().map(|v| v.moment(p)).sum::<f64>().powf(1.0 / p);
    let id = format!("rosenthal[p={p}]");
    Ok(RatioReport::new(id.as_str(), lhs, l2 + lp, caps.cap(&id)))
}

pub fn check_rosenthal_vars(vars: &[DiscreteVariable], p: f64, caps: &CapsTable) -> Result<RatioReport> {
    check_rosenthal(&product_martingale(vars)?, p, caps)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::decomp::{davis, PairKind};
    use crate::space::{corpus, CorpusSpec, GeneratorKind, TreeDescription, ValueDistribution};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    fn sample(count: usize) -> Vec<Martingale> {
        let spec = CorpusSpec {
            kind: GeneratorKind::RandomTree,
            depth: 4,
            max_branching: 3,
            values: ValueDistribution::Gaussian,
            count,
            seed: 21,
            ..Default::default()
        };
        corpus(&spec).unwrap().into_iter().map(|i| i.martingale().unwrap().clone()).collect()
    }

    #[test]
    fn burkholder_at_two_uses_the_l2_identity() {
        let caps = CapsTable::default();
        for f in sample(20) {
            let (low, _) = check_burkholder_p(&f, 2.0, &caps).unwrap();
            let s = conditional_square_function(&f, CsfMode::Paper);
            assert!(close(norm(f.tree(), &s, 2.0).unwrap(), low.lhs));
            assert!(low.ratio <= 1.0);
        }
        let r = rademacher(&[0.3, -1.2, 2.0]).unwrap();
        let (low, high) = check_burkholder_p(&r, 2.0, &caps).unwrap();
        assert!(close(high.ratio, 2.0));
        assert!(close(low.ratio, 0.5));
        assert!(matches!(check_burkholder_p(&r, 1.5, &caps), Err(Error::BadExponent(_))));
    }

    #[test]
    fn bminus_trivial_pairs() {
        let caps = CapsTable::default();
        for f in sample(10) {
            let zero = f.scaled(0.0);
            let gf = MartingalePair::new(&f, f.clone(), zero.clone(), PairKind::Custom).unwrap();
            let start = Martingale::from_differences(Arc::clone(f.tree()), f.f0(), zero.differences()).unwrap();
            let hf = MartingalePair::new(&f, start, f.centered(), PairKind::Custom).unwrap();
            let p = 1.5;
            let norm_f = norm(f.tree(), f.centered().terminal(), p).unwrap();
            let s = norm(f.tree(), &conditional_square_function(&f, CsfMode::Paper), p).unwrap();
            let v = norm(f.tree(), &p_variation(f.tree(), &f.differences(), p).unwrap(), p).unwrap();
            assert!(close(check_bminus_upper(&f, p, &gf, &caps).unwrap().ratio, s / norm_f));
            assert!(close(check_bminus_upper(&f, p, &hf, &caps).unwrap().ratio, v / norm_f));
            assert!(check_bminus_upper(&f, p, &davis(&f), &caps).unwrap().ratio.is_finite());
            assert!(check_bminus_upper(&f, 2.5, &gf, &caps).is_err());
            let bad = MartingalePair { g: f.clone(), h: f.clone(), kind: PairKind::Custom };
            assert!(matches!(check_bminus_upper(&f, p, &bad, &caps), Err(Error::NotADecomposition { .. })));
        }
    }

    #[test]
    fn dual_doob_examples() {
        let caps = CapsTable::default();
        for f in sample(20) {
            let phi: Vec<_> = f.differences().iter().map(AdaptedFunction::abs).collect();
            let r = check_dual_doob(f.tree(), &phi, 1.0, &caps).unwrap();
            assert!(close(r.ratio, 1.0));
            assert!(r.pass);
            assert!(check_dual_doob(f.tree(), &phi, 3.0, &caps).unwrap().ratio.is_finite());
        }
        let t = FiltrationTree::uniform(3, 2).unwrap();
        let ones: Vec<_> = (1..=3).map(|m| AdaptedFunction::constant(&t, m, 1.0)).collect();
        for p in [1.0, 2.0, 3.0] {
            assert!(close(check_dual_doob(&t, &ones, p, &caps).unwrap().ratio, 1.0));
        }
        let neg = vec![AdaptedFunction::constant(&t, 1, -1.0)];
        assert!(matches!(check_dual_doob(&t, &neg, 1.0, &caps), Err(Error::NegativeInput { .. })));
    }

    #[test]
    fn khintchine_values() {
        let caps = CapsTable::default();
        assert!(close(check_khintchine(&[0.5, -2.0, 1.0], 2.0, &caps).unwrap().ratio, 1.0));
        assert!(close(check_khintchine(&[1.0, 1.0], 4.0, &caps).unwrap().ratio, 2f64.powf(0.25)));
    }

    #[test]
    fn rosenthal_values() {
        let caps = CapsTable::default();
        let vars = vec![
            DiscreteVariable::rademacher(1.0),
            DiscreteVariable { values: vec![-1.0, 2.0], probabilities: vec![2.0 / 3.0, 1.0 / 3.0] },
            DiscreteVariable { values: vec![-0.5, 0.0, 1.0], probabilities: vec![0.5, 0.25, 0.25] },
        ];
        let r2 = check_rosenthal_vars(&vars, 2.0, &caps).unwrap();
        assert!(close(r2.ratio, 0.5));
        let r4 = check_rosenthal_vars(&vars, 4.0, &caps).unwrap();
        assert!(r4.ratio > 0.0 && r4.ratio <= 1.0);

        let desc = TreeDescription { levels: vec![vec![0, 0], vec![0, 0, 1]], leaf_weights: vec![0.25, 0.25, 0.5] };
        let t = Arc::new(FiltrationTree::build(&desc).unwrap());
        let x = AdaptedFunction::new(&t, 2, vec![1.0, -1.0, 0.0]).unwrap();
        let f = Martingale::from_terminal(t, x).unwrap();
        assert!(matches!(check_rosenthal(&f, 2.0, &caps), Err(Error::NonProduct { level: 2 })));
    }
}
