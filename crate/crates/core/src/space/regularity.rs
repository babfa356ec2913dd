//! Regularity and homogeneity diagnostics for finite filtrations.

use crate::space::function::AdaptedFunction;
use crate::space::tree::FiltrationTree;

/// Least `k` with `f_n ≤ k f_{n−1}` for every non-negative martingale.
///
/// On an atomic filtration the extremal martingales are closures of leaf
/// indicators, which makes the constant `max μ(parent)/μ(atom)` over all
/// non-root atoms.
pub fn regularity_constant(tree: &FiltrationTree) -> f64 {
    let mut k = 1.0_f64;
    for level in 1..=tree.depth() {
        let up = tree.measures(level - 1);
        for (atom, &p) in tree.parents(level).iter().enumerate() {
            k = k.max(up[p] / tree.measures(level)[atom]);
        }
    }
    k
}

/// Least `k` with `μ(supp E_{n−1} χ_A) ≤ k μ(A)` for all `A ∈ A_n`.
///
/// Computed from the definition: for each single atom `A` the conditional
/// expectation `E_{n−1} χ_A` is formed and its support measured. Unions of
/// atoms cannot do worse than their worst member, since the ratio of sums is
/// bounded by the largest ratio of the parts.
pub fn homogeneity_constant(tree: &FiltrationTree) -> f64 {
    let mut k = 1.0_f64;
    for level in 1..=tree.depth() {
        let measures = tree.measures(level);
        for atom in 0..tree.atom_count(level) {
            let indicator = AdaptedFunction::indicator(tree, level, atom);
            let e = tree.conditional_expectation(&indicator, level - 1).expect("valid level");
            let support = tree.measure_where(&e, |v| v > 0.0);
            k = k.max(support / measures[atom]);
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::tree::TreeDescription;

    #[test]
    fn dyadic_is_two_regular() {
        let t = FiltrationTree::uniform(4, 2).unwrap();
        assert!((regularity_constant(&t) - 2.0).abs() < 1e-12);
        assert!((homogeneity_constant(&t) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chains_are_one_regular() {
        let t = FiltrationTree::uniform(3, 1).unwrap();
        assert_eq!(regularity_constant(&t), 1.0);
        assert_eq!(homogeneity_constant(&t), 1.0);
    }

    #[test]
    fn skewed_split() {
        let t = FiltrationTree::build(&TreeDescription { levels: vec![vec![0, 0]], leaf_weights: vec![0.9, 0.1] })
            .unwrap();
        assert!((regularity_constant(&t) - 10.0).abs() < 1e-9);
        assert!((homogeneity_constant(&t) - 10.0).abs() < 1e-9);
    }
}
