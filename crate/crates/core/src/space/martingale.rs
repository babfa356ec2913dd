use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::function::AdaptedFunction;
use crate::space::tree::FiltrationTree;
use crate::tolerances::TOWER_RELATIVE;

/// A martingale `f_0, f_1, …, f_N` on a finite filtration.
///
/// `f_0` is the constant on the trivial level and equals `E f_1`. The running
/// maximum includes it: `f_n^* = max_{0 ≤ k ≤ n} |f_k|`, so `f_0^* = |f_0|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Martingale {
    tree: Arc<FiltrationTree>,
    f0: f64,
    levels: Vec<AdaptedFunction>,
}

impl Martingale {
    /// Checks level shapes and the tower property `E_{k-1} f_k = f_{k-1}`.
    pub fn new(tree: Arc<FiltrationTree>, f0: f64, levels: Vec<AdaptedFunction>) -> Result<Self> {
        let depth = tree.depth();
        if levels.len() != depth {
            return Err(Error::LengthMismatch { level: depth, expected: depth, got: levels.len() });
        }
        if !f0.is_finite() {
            return Err(Error::NonFinite { level: 0, atom: 0 });
        }
        for (i, f) in levels.iter().enumerate() {
            AdaptedFunction::new(&tree, i + 1, f.values().to_vec())?;
            if f.level() != i + 1 {
                return Err(Error::LevelMismatch { left: f.level(), right: i + 1 });
            }
        }
        let m = Self { tree, f0, levels };
        m.validate_tower()?;
        Ok(m)
    }

    /// The closure `f_k = E_k x` of a terminal function `x` at the leaf level.
    pub fn from_terminal(tree: Arc<FiltrationTree>, terminal: AdaptedFunction) -> Result<Self> {
        let depth = tree.depth();
        if terminal.level() != depth {
            return Err(Error::LevelMismatch { left: terminal.level(), right: depth });
        }
        AdaptedFunction::new(&tree, depth, terminal.values().to_vec())?;
        let mut levels = vec![terminal];
        for d in (0..depth).rev() {
            let next = tree.conditional_expectation(levels.last().unwrap(), d)?;
            levels.push(next);
        }
        levels.reverse();
        let f0 = levels.remove(0).values()[0];
        Ok(Self { tree, f0, levels })
    }

    /// Sums `f_0 + df_1 + … + df_k`, checking that each `df_k` is centred.
    pub fn from_differences(tree: Arc<FiltrationTree>, f0: f64, diffs: Vec<AdaptedFunction>) -> Result<Self> {
        let depth = tree.depth();
        if diffs.len() != depth {
            return Err(Error::LengthMismatch { level: depth, expected: depth, got: diffs.len() });
        }
        let mut levels = Vec::with_capacity(depth);
        let mut current = AdaptedFunction::constant(&tree, 0, f0);
        for (i, d) in diffs.iter().enumerate() {
            let k = i + 1;
            if d.level() != k {
                return Err(Error::LevelMismatch { left: d.level(), right: k });
            }
            let prev = tree.broadcast(&current, k)?;
            current = prev.zip_with(d, |a, b| a + b)?;
            levels.push(current.clone());
        }
        Self::new(tree, f0, levels)
    }

    fn validate_tower(&self) -> Result<()> {
        let scale = self.levels.iter().map(AdaptedFunction::max_abs).fold(self.f0.abs(), f64::max);
        for k in 1..=self.depth() {
            let projected = self.tree.conditional_expectation(&self.levels[k - 1], k - 1)?;
            let prev = self.level(k - 1);
            let deviation = projected
                .values()
                .iter()
                .zip(prev.values())
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            if deviation > TOWER_RELATIVE * scale {
                return Err(Error::NotAMartingale { level: k, deviation });
            }
        }
        Ok(())
    }

    pub fn tree(&self) -> &Arc<FiltrationTree> {
        &self.tree
    }

    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    /// `f_k`, including the level-0 constant.
    pub fn level(&self, k: usize) -> AdaptedFunction {
        if k == 0 {
            AdaptedFunction::constant(&self.tree, 0, self.f0)
        } else {
            self.levels[k - 1].clone()
        }
    }

    pub fn levels(&self) -> &[AdaptedFunction] {
        &self.levels
    }

    pub fn terminal(&self) -> &AdaptedFunction {
        self.levels.last().expect("depth >= 1")
    }

    /// `df_k = f_k − f_{k−1}` for `k = 1..N`.
    pub fn differences(&self) -> Vec<AdaptedFunction> {
        (1..=self.depth())
            .map(|k| {
                let prev = self.tree.broadcast(&self.level(k - 1), k).expect("valid level");
                self.levels[k - 1].zip_with(&prev, |a, b| a - b).expect("same level")
            })
            .collect()
    }

    /// `f_n^*` on the atoms of level `n`.
    pub fn maximal(&self, n: usize) -> Result<AdaptedFunction> {
        self.tree.check_level(n)?;
        Ok(self.maximal_all().swap_remove(n))
    }

    /// `f_0^*, f_1^*, …, f_N^*`.
    pub fn maximal_all(&self) -> Vec<AdaptedFunction> {
        let mut out = Vec::with_capacity(self.depth() + 1);
        out.push(AdaptedFunction::constant(&self.tree, 0, self.f0.abs()));
        for k in 1..=self.depth() {
            let prev = self.tree.broadcast(out.last().unwrap(), k).expect("valid level");
            out.push(prev.zip_with(&self.levels[k - 1], |m, v| m.max(v.abs())).expect("same level"));
        }
        out
    }

    /// `‖f‖_1 := ‖f_N‖_1`.
    pub fn l1_norm(&self) -> f64 {
        self.tree.integrate(&self.terminal().abs())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terminal().min_value() >= 0.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            tree: Arc::clone(&self.tree),
            f0: self.f0 * c,
            levels: self.levels.iter().map(|f| f.map(|v| v * c)).collect(),
        }
    }

    /// `f − f_0`: the same differences started from zero.
    pub fn centered(&self) -> Self {
        Self {
            tree: Arc::clone(&self.tree),
            f0: 0.0,
            levels: self.levels.iter().map(|f| f.map(|v| v - self.f0)).collect(),
        }
    }
}

/// An adapted family that is not required to be a martingale, such as the
/// indicator families `χ_(0,1/k]` and `1/k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedSequence {
    pub tree: Arc<FiltrationTree>,
    pub terms: Vec<AdaptedFunction>,
}

/// What a generator produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Sequence {
    Martingale(Martingale),
    Adapted(AdaptedSequence),
}

impl Sequence {
    pub fn as_martingale(&self) -> Result<&Martingale> {
        match self {
            Sequence::Martingale(m) => Ok(m),
            Sequence::Adapted(_) => Err(Error::NotMartingaleSequence),
        }
    }

    pub fn tree(&self) -> &Arc<FiltrationTree> {
        match self {
            Sequence::Martingale(m) => m.tree(),
            Sequence::Adapted(a) => &a.tree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyadic(depth: usize) -> Arc<FiltrationTree> {
        Arc::new(FiltrationTree::uniform(depth, 2).unwrap())
    }

    fn terminal(tree: &Arc<FiltrationTree>, v: &[f64]) -> Martingale {
        let x = AdaptedFunction::new(tree, tree.depth(), v.to_vec()).unwrap();
        Martingale::from_terminal(Arc::clone(tree), x).unwrap()
    }

    #[test]
    fn closure_of_terminal_values() {
        let t = dyadic(2);
        let f = terminal(&t, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(f.level(1).values(), &[1.5, 3.5]);
        assert_eq!(f.f0(), 2.5);

        let r = terminal(&t, &[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(r.level(1).values(), &[0.0, 0.0]);
        assert_eq!(r.f0(), 0.0);

        let c = terminal(&t, &[3.0; 4]);
        assert!(c.differences().iter().all(|d| d.values().iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn differences_subtract_parent_values() {
        let t = dyadic(2);
        let f = terminal(&t, &[1.0, 2.0, 3.0, 4.0]);
        let d = f.differences();
        assert_eq!(d[0].values(), &[-1.0, 1.0]);
        assert_eq!(d[1].values(), &[-0.5, 0.5, -0.5, 0.5]);
    }

    #[test]
    fn maximal_takes_running_max_over_ancestors() {
        // f_1 = (0.5, 1.5), f_2 = (0.25, 0.75, 0.5, 2.5); f_0 = 1 enters the max.
        let t = dyadic(2);
        let f = terminal(&t, &[0.25, 0.75, 0.5, 2.5]);
        assert_eq!(f.level(1).values(), &[0.5, 1.5]);
        assert_eq!(f.maximal(0).unwrap().values(), &[1.0]);
        assert_eq!(f.maximal(1).unwrap().values(), &[1.0, 1.5]);
        assert_eq!(f.maximal(2).unwrap().values(), &[1.0, 1.0, 1.5, 2.5]);

        let centered = f.centered();
        assert_eq!(centered.maximal(2).unwrap().values(), &[0.75, 0.5, 0.5, 1.5]);
    }

    #[test]
    fn rejects_non_martingales() {
        let t = dyadic(1);
        let f1 = AdaptedFunction::new(&t, 1, vec![1.0, 2.0]).unwrap();
        let err = Martingale::new(Arc::clone(&t), 0.0, vec![f1.clone()]).unwrap_err();
        assert!(matches!(err, Error::NotAMartingale { level: 1, .. }));
        assert!(Martingale::new(t, 1.5, vec![f1]).is_ok());
    }

    #[test]
    fn from_differences_reassembles() {
        let t = dyadic(3);
        let f = terminal(&t, &[0.3, -1.0, 2.0, 0.0, 5.0, 1.0, -2.0, 0.5]);
        let g = Martingale::from_differences(Arc::clone(&t), f.f0(), f.differences()).unwrap();
        for (a, b) in f.terminal().values().iter().zip(g.terminal().values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut bad = f.differences();
        bad[1] = bad[1].map(|v| v + 1.0);
        assert!(Martingale::from_differences(t, f.f0(), bad).is_err());
    }

    #[test]
    fn adapted_sequences_are_not_martingales() {
        let t = dyadic(1);
        let s = Sequence::Adapted(AdaptedSequence { tree: Arc::clone(&t), terms: vec![] });
        assert!(matches!(s.as_martingale(), Err(Error::NotMartingaleSequence)));
    }
}
