//! Rooted measure trees.
//!
//! A filtration `A_0 ⊂ A_1 ⊂ … ⊂ A_N` of a finite probability space is stored
//! as a tree: the atoms of `A_d` are the nodes at depth `d`, each node's
//! children partition it, and the leaves carry the measure. Level 0 is the
//! trivial σ-algebra (a single root atom).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::function::AdaptedFunction;
use crate::tolerances::WEIGHT_SUM;

/// Level-wise parent assignments plus leaf weights.
///
/// `levels[i]` lists, for every atom of level `i + 1`, the index of its parent
/// at level `i`. The last level is the leaf level and `leaf_weights` has one
/// entry per leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDescription {
    pub levels: Vec<Vec<usize>>,
    pub leaf_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct Level {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    measure: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationTree {
    levels: Vec<Level>,
    /// `leaf_ancestor[d][leaf]` is the level-`d` atom containing `leaf`.
    leaf_ancestor: Vec<Vec<usize>>,
}

impl FiltrationTree {
    /// Validates a description and precomputes atom measures bottom-up.
    pub fn build(description: &TreeDescription) -> Result<Self> {
        let depth = description.levels.len();
        if depth == 0 {
            return Err(Error::EmptyFiltration);
        }
        let mut sizes = Vec::with_capacity(depth + 1);
        sizes.push(1usize);
        for (i, parents) in description.levels.iter().enumerate() {
            if parents.is_empty() {
                return Err(Error::EmptyLevel { level: i + 1 });
            }
            for (atom, &p) in parents.iter().enumerate() {
                if p >= sizes[i] {
                    return Err(Error::OrphanAtom { level: i + 1, atom, parent: p });
                }
            }
            sizes.push(parents.len());
        }
        let leaves = sizes[depth];
        if description.leaf_weights.len() != leaves {
            return Err(Error::LengthMismatch {
                level: depth,
                expected: leaves,
                got: description.leaf_weights.len(),
            });
        }
        for (index, &weight) in description.leaf_weights.iter().enumerate() {
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::NonPositiveWeight { index, weight });
            }
        }
        let sum: f64 = description.leaf_weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM {
            return Err(Error::WeightSum { sum });
        }

        let mut levels: Vec<Level> = Vec::with_capacity(depth + 1);
        levels.push(Level { parent: Vec::new(), children: vec![Vec::new()], measure: vec![0.0] });
        for (i, parents) in description.levels.iter().enumerate() {
            for (atom, &p) in parents.iter().enumerate() {
                levels[i].children[p].push(atom);
            }
            for (atom, kids) in levels[i].children.iter().enumerate() {
                if kids.is_empty() {
                    return Err(Error::ChildlessAtom { level: i, atom });
                }
            }
            levels.push(Level {
                parent: parents.clone(),
                children: vec![Vec::new(); parents.len()],
                measure: vec![0.0; parents.len()],
            });
        }
        levels[depth].measure = description.leaf_weights.clone();
        for d in (0..depth).rev() {
            let mut measure = vec![0.0; sizes[d]];
            for (atom, &p) in levels[d + 1].parent.iter().enumerate() {
                measure[p] += levels[d + 1].measure[atom];
            }
            levels[d].measure = measure;
        }

        let mut leaf_ancestor = vec![Vec::new(); depth + 1];
        leaf_ancestor[depth] = (0..leaves).collect();
        for d in (0..depth).rev() {
            let below = &leaf_ancestor[d + 1];
            leaf_ancestor[d] = below.iter().map(|&a| levels[d + 1].parent[a]).collect();
        }
        Ok(Self { levels, leaf_ancestor })
    }

    /// Uniform `arity`-adic tree of the given depth.
    pub fn uniform(depth: usize, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameters("arity must be >= 1".into()));
        }
        let mut levels = Vec::with_capacity(depth);
        let mut width = 1usize;
        for _ in 0..depth {
            levels.push((0..width * arity).map(|a| a / arity).collect::<Vec<_>>());
            width *= arity;
        }
        let w = 1.0 / width as f64;
        Self::build(&TreeDescription { levels, leaf_weights: vec![w; width] })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn atom_count(&self, level: usize) -> usize {
        self.levels[level].measure.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.atom_count(self.depth())
    }

    /// Measures of the atoms of `level`.
    pub fn measures(&self, level: usize) -> &[f64] {
        &self.levels[level].measure
    }

    /// Parent indices of the atoms of `level` (empty for the root level).
    pub fn parents(&self, level: usize) -> &[usize] {
        &self.levels[level].parent
    }

    pub fn children(&self, level: usize, atom: usize) -> &[usize] {
        &self.levels[level].children[atom]
    }

    /// Level-`level` atom containing each leaf.
    pub fn leaf_ancestors(&self, level: usize) -> &[usize] {
        &self.leaf_ancestor[level]
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            Err(Error::LevelOutOfRange { level, depth: self.depth() })
        } else {
            Ok(())
        }
    }

    /// Recovers the description this tree was built from.
    pub fn description(&self) -> TreeDescription {
        TreeDescription {
            levels: self.levels[1..].iter().map(|l| l.parent.clone()).collect(),
            leaf_weights: self.levels[self.depth()].measure.clone(),
        }
    }

    /// `E_d g` for `g` measurable at a level `m >= d`.
    ///
    /// Averaging is done one level at a time, so `E_{d'} E_d = E_{d'}` holds up
    /// to rounding.
    pub fn conditional_expectation(&self, g: &AdaptedFunction, level: usize) -> Result<AdaptedFunction> {
        self.check_level(g.level())?;
        self.check_level(level)?;
        if level > g.level() {
            return Err(Error::BadProjection { from: g.level(), to: level });
        }
        let mut values = g.values().to_vec();
        for m in (level + 1..=g.level()).rev() {
            let upper = m - 1;
            let mut acc = vec![0.0; self.atom_count(upper)];
            let weights = self.measures(m);
            for (atom, &p) in self.parents(m).iter().enumerate() {
                acc[p] += weights[atom] * values[atom];
            }
            for (a, mu) in acc.iter_mut().zip(self.measures(upper)) {
                *a /= mu;
            }
            values = acc;
        }
        Ok(AdaptedFunction::from_raw(level, values))
    }

    /// Views a level-`d` function as a function on a finer level.
    pub fn broadcast(&self, g: &AdaptedFunction, level: usize) -> Result<AdaptedFunction> {
        self.check_level(level)?;
        if level < g.level() {
            return Err(Error::BadProjection { from: g.level(), to: level });
        }
        let mut values = g.values().to_vec();
        for m in g.level() + 1..=level {
            values = self.parents(m).iter().map(|&p| values[p]).collect();
        }
        Ok(AdaptedFunction::from_raw(level, values))
    }

    /// Values of `g` indexed by leaf.
    pub fn on_leaves(&self, g: &AdaptedFunction) -> Vec<f64> {
        self.leaf_ancestor[g.level()].iter().map(|&a| g.values()[a]).collect()
    }

    /// `∫ g dμ`.
    pub fn integrate(&self, g: &AdaptedFunction) -> f64 {
        g.values().iter().zip(self.measures(g.level())).map(|(v, w)| v * w).sum()
    }

    /// Measure of `{ω : predicate(g(ω))}`.
    pub fn measure_where(&self, g: &AdaptedFunction, predicate: impl Fn(f64) -> bool) -> f64 {
        g.values()
            .iter()
            .zip(self.measures(g.level()))
            .filter(|(v, _)| predicate(**v))
            .map(|(_, w)| w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn dyadic_depth_two_has_expected_level_sizes() {
        let t = FiltrationTree::build(&TreeDescription {
            levels: vec![vec![0, 0], vec![0, 0, 1, 1]],
            leaf_weights: vec![0.25; 4],
        })
        .unwrap();
        assert_eq!((t.atom_count(0), t.atom_count(1), t.atom_count(2)), (1, 2, 4));
        assert!(approx(t.measures(0)[0], 1.0));
    }

    #[test]
    fn uneven_split_accumulates_measures() {
        let t = FiltrationTree::build(&TreeDescription {
            levels: vec![vec![0, 0], vec![0, 1, 1]],
            leaf_weights: vec![0.5, 0.25, 0.25],
        })
        .unwrap();
        assert!(approx(t.measures(1)[0], 0.5));
        assert!(approx(t.measures(1)[1], 0.5));
    }

    #[test]
    fn rejects_bad_descriptions() {
        let bad_sum = TreeDescription { levels: vec![vec![0, 0, 0]], leaf_weights: vec![0.3, 0.3, 0.3] };
        assert!(matches!(FiltrationTree::build(&bad_sum), Err(Error::WeightSum { .. })));

        let zero = TreeDescription { levels: vec![vec![0, 0]], leaf_weights: vec![1.0, 0.0] };
        assert!(matches!(FiltrationTree::build(&zero), Err(Error::NonPositiveWeight { index: 1, .. })));

        let orphan = TreeDescription { levels: vec![vec![0, 0], vec![0, 2]], leaf_weights: vec![0.5, 0.5] };
        assert!(matches!(FiltrationTree::build(&orphan), Err(Error::OrphanAtom { .. })));

        let childless = TreeDescription { levels: vec![vec![0, 0], vec![0, 0]], leaf_weights: vec![0.5, 0.5] };
        assert!(matches!(FiltrationTree::build(&childless), Err(Error::ChildlessAtom { level: 1, atom: 1 })));

        let empty = TreeDescription { levels: vec![vec![0], vec![]], leaf_weights: vec![] };
        assert!(matches!(FiltrationTree::build(&empty), Err(Error::EmptyLevel { level: 2 })));

        let none = TreeDescription { levels: vec![], leaf_weights: vec![1.0] };
        assert!(matches!(FiltrationTree::build(&none), Err(Error::EmptyFiltration)));
    }

    #[test]
    fn conditional_expectation_averages_children() {
        let t = FiltrationTree::uniform(2, 2).unwrap();
        let g = AdaptedFunction::new(&t, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let e1 = t.conditional_expectation(&g, 1).unwrap();
        assert_eq!(e1.values(), &[1.5, 3.5]);
        let e0 = t.conditional_expectation(&g, 0).unwrap();
        assert_eq!(e0.values(), &[2.5]);
        let same = t.conditional_expectation(&g, 2).unwrap();
        assert_eq!(same, g);
        assert!(matches!(t.conditional_expectation(&e1, 2), Err(Error::BadProjection { .. })));
        assert!(matches!(t.conditional_expectation(&g, 3), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn constants_are_preserved() {
        let t = FiltrationTree::uniform(3, 3).unwrap();
        let c = AdaptedFunction::constant(&t, 3, -1.75);
        for d in 0..=3 {
            let e = t.conditional_expectation(&c, d).unwrap();
            assert!(e.values().iter().all(|&v| approx(v, -1.75)));
        }
    }

    #[test]
    fn description_round_trips() {
        let t = FiltrationTree::uniform(3, 2).unwrap();
        let again = FiltrationTree::build(&t.description()).unwrap();
        assert_eq!(t, again);
    }
}
