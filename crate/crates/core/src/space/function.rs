use crate::error::{Error, Result};
use crate::space::tree::FiltrationTree;

/// A function measurable with respect to `A_d`: one value per level-`d` atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFunction {
    level: usize,
    values: Vec<f64>,
}

impl AdaptedFunction {
    pub fn new(tree: &FiltrationTree, level: usize, values: Vec<f64>) -> Result<Self> {
        tree.check_level(level)?;
        let expected = tree.atom_count(level);
        if values.len() != expected {
            return Err(Error::LengthMismatch { level, expected, got: values.len() });
        }
        if let Some(atom) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { level, atom });
        }
        Ok(Self { level, values })
    }

    /// Unchecked constructor for values produced by in-crate arithmetic.
    pub(crate) fn from_raw(level: usize, values: Vec<f64>) -> Self {
        Self { level, values }
    }

    pub fn constant(tree: &FiltrationTree, level: usize, c: f64) -> Self {
        Self { level, values: vec![c; tree.atom_count(level)] }
    }

    pub fn zeros(tree: &FiltrationTree, level: usize) -> Self {
        Self::constant(tree, level, 0.0)
    }

    /// Indicator of a level-`level` atom.
    pub fn indicator(tree: &FiltrationTree, level: usize, atom: usize) -> Self {
        let mut f = Self::zeros(tree, level);
        f.values[atom] = 1.0;
        f
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { level: self.level, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination of two functions on the same level.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch { left: self.level, right: other.level });
        }
        Ok(Self {
            level: self.level,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
