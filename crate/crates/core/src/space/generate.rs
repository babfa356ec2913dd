//! Instance generators: random corpora and the classical example families.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel;
use crate::space::function::AdaptedFunction;
use crate::space::martingale::{AdaptedSequence, Martingale, Sequence};
use crate::space::rng::instance_rng;
use crate::space::tree::{FiltrationTree, TreeDescription};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// Uniform binary tree.
    Dyadic,
    /// Uniform `max_branching`-adic tree.
    Uniform,
    /// Random branching in `[2, max_branching]` with skewed leaf weights.
    RandomTree,
    /// `Σ λ_k ε_k` on the dyadic tree, with `λ_k` drawn from the value law.
    Rademacher,
    /// `χ_(0,1/k]`, `k = 1..depth`.
    PhiFamily,
    /// `1/k` on a single atom, `k = 1..depth`.
    XiFamily,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dyadic" => Self::Dyadic,
            "uniform" => Self::Uniform,
            "random-tree" => Self::RandomTree,
            "rademacher" => Self::Rademacher,
            "phi-family" => Self::PhiFamily,
            "xi-family" => Self::XiFamily,
            other => return Err(Error::InvalidSpec(format!("unsupported generator kind `{other}`"))),
        })
    }
}

/// Law of terminal values (or Rademacher coefficients).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueDistribution {
    Gaussian,
    Uniform,
    /// Exponential(1): strictly positive martingales.
    Positive,
    /// Zero with probability 0.8, otherwise a scaled exponential spike.
    Sparse,
    /// Signed Pareto with tail index 1.5.
    HeavyTail,
}

impl std::str::FromStr for ValueDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gaussian" => Self::Gaussian,
            "uniform" => Self::Uniform,
            "positive" => Self::Positive,
            "sparse" => Self::Sparse,
            "heavy-tail" => Self::HeavyTail,
            other => return Err(Error::InvalidSpec(format!("unknown value distribution `{other}`"))),
        })
    }
}

impl ValueDistribution {
    fn sample(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Gaussian => StandardNormal.sample(rng),
            Self::Uniform => rng.random_range(-1.0..1.0),
            Self::Positive => Exp1.sample(rng),
            Self::Sparse => {
                if rng.random_bool(0.2) {
                    let e: f64 = Exp1.sample(rng);
                    4.0 * e + 0.5
                } else {
                    0.0
                }
            }
            Self::HeavyTail => {
                let u: f64 = rng.random_range(f64::EPSILON..1.0);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                sign * u.powf(-1.0 / 1.5)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub kind: GeneratorKind,
    /// Tree depth; for the φ/ξ families, the number of terms `m`.
    pub depth: usize,
    pub max_branching: usize,
    /// Leaf-weight skew in `[0, 1)`; 0 gives flat Dirichlet weights.
    pub skew: f64,
    pub values: ValueDistribution,
    pub count: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            kind: GeneratorKind::Dyadic,
            depth: 6,
            max_branching: 2,
            skew: 0.0,
            values: ValueDistribution::Gaussian,
            count: 16,
            seed: 0,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidSpec("count must be >= 1".into()));
        }
        if self.depth == 0 {
            return Err(Error::InvalidSpec("depth must be >= 1".into()));
        }
        if matches!(self.kind, GeneratorKind::Uniform | GeneratorKind::RandomTree) && self.max_branching < 2 {
            return Err(Error::InvalidSpec("branching must be >= 2".into()));
        }
        if !(0.0..1.0).contains(&self.skew) {
            return Err(Error::InvalidSpec(format!("skew {} outside [0, 1)", self.skew)));
        }
        Ok(())
    }
}

/// One generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub index: usize,
    pub sequence: Sequence,
}

impl Instance {
    pub fn martingale(&self) -> Result<&Martingale> {
        self.sequence.as_martingale()
    }
}

/// Instance `index` of a corpus; a pure function of `(spec.seed, index)`.
pub fn generate(spec: &CorpusSpec, index: usize) -> Result<Instance> {
    spec.validate()?;
    let mut rng = instance_rng(spec.seed, index as u64);
    let sequence = match spec.kind {
        GeneratorKind::Dyadic => {
            let tree = Arc::new(FiltrationTree::uniform(spec.depth, 2)?);
            Sequence::Martingale(random_terminal(tree, spec.values, &mut rng)?)
        }
        GeneratorKind::Uniform => {
            let tree = Arc::new(FiltrationTree::uniform(spec.depth, spec.max_branching)?);
            Sequence::Martingale(random_terminal(tree, spec.values, &mut rng)?)
        }
        GeneratorKind::RandomTree => {
            let tree = Arc::new(random_tree(spec.depth, spec.max_branching, spec.skew, &mut rng)?);
            Sequence::Martingale(random_terminal(tree, spec.values, &mut rng)?)
        }
        GeneratorKind::Rademacher => {
            let lambdas: Vec<f64> = (0..spec.depth).map(|_| spec.values.sample(&mut rng)).collect();
            Sequence::Martingale(rademacher(&lambdas)?)
        }
        GeneratorKind::PhiFamily => Sequence::Adapted(phi_family(spec.depth)?),
        GeneratorKind::XiFamily => Sequence::Adapted(xi_family(spec.depth)?),
    };
    Ok(Instance { index, sequence })
}

/// All `spec.count` instances, generated in parallel and returned in index order.
pub fn corpus(spec: &CorpusSpec) -> Result<Vec<Instance>> {
    spec.validate()?;
    parallel::map_indexed(spec.count, |i| generate(spec, i)).into_iter().collect()
}

fn random_terminal(tree: Arc<FiltrationTree>, law: ValueDistribution, rng: &mut ChaCha8Rng) -> Result<Martingale> {
    let values: Vec<f64> = (0..tree.leaf_count()).map(|_| law.sample(rng)).collect();
    let x = AdaptedFunction::new(&tree, tree.depth(), values)?;
    Martingale::from_terminal(tree, x)
}

fn random_tree(depth: usize, max_branching: usize, skew: f64, rng: &mut ChaCha8Rng) -> Result<FiltrationTree> {
    let mut levels = Vec::with_capacity(depth);
    let mut width = 1usize;
    for _ in 0..depth {
        let mut parents = Vec::new();
        for p in 0..width {
            let b = rng.random_range(2..=max_branching);
            parents.extend(std::iter::repeat_n(p, b));
        }
        width = parents.len();
        levels.push(parents);
    }
    let power = 1.0 / (1.0 - skew);
    let raw: Vec<f64> = (0..width)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e.powf(power).max(f64::MIN_POSITIVE)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let leaf_weights = raw.iter().map(|w| w / total).collect();
    FiltrationTree::build(&TreeDescription { levels, leaf_weights })
}

/// `f_N = Σ_k λ_k ε_k` on the uniform dyadic tree of depth `λ.len()`, where
/// `ε_k = +1` on the first child and `−1` on the second.
pub fn rademacher(lambdas: &[f64]) -> Result<Martingale> {
    let depth = lambdas.len();
    let tree = Arc::new(FiltrationTree::uniform(depth, 2)?);
    let diffs = (1..=depth)
        .map(|k| {
            let values = (0..tree.atom_count(k))
                .map(|a| if a % 2 == 0 { lambdas[k - 1] } else { -lambdas[k - 1] })
                .collect();
            AdaptedFunction::new(&tree, k, values)
        })
        .collect::<Result<Vec<_>>>()?;
    Martingale::from_differences(tree, 0.0, diffs)
}

/// Depth-1 filtration on the atoms `(1/2,1], (1/3,1/2], …, (0,1/m]` with the
/// family `φ_k = χ_(0,1/k]`, `k = 1..m`.
pub fn phi_family(m: usize) -> Result<AdaptedSequence> {
    if m == 0 {
        return Err(Error::InvalidParameters("phi family needs m >= 1".into()));
    }
    let leaf_weights: Vec<f64> = (1..=m)
        .map(|j| if j < m { 1.0 / j as f64 - 1.0 / (j + 1) as f64 } else { 1.0 / m as f64 })
        .collect();
    let tree = Arc::new(FiltrationTree::build(&TreeDescription { levels: vec![vec![0; m]], leaf_weights })?);
    // atom j - 1 is the interval with right end 1/j; it lies in (0, 1/k] iff j >= k
    let terms = (1..=m)
        .map(|k| AdaptedFunction::new(&tree, 1, (1..=m).map(|j| if j >= k { 1.0 } else { 0.0 }).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(AdaptedSequence { tree, terms })
}

/// Single atom `[0, 1]` carrying `ξ_k = 1/k`, `k = 1..m`.
pub fn xi_family(m: usize) -> Result<AdaptedSequence> {
    if m == 0 {
        return Err(Error::InvalidParameters("xi family needs m >= 1".into()));
    }
    let tree = Arc::new(FiltrationTree::uniform(1, 1)?);
    let terms = (1..=m).map(|k| AdaptedFunction::constant(&tree, 1, 1.0 / k as f64)).collect();
    Ok(AdaptedSequence { tree, terms })
}

/// A finitely supported real random variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteVariable {
    pub values: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl DiscreteVariable {
    pub fn rademacher(scale: f64) -> Self {
        Self { values: vec![scale, -scale], probabilities: vec![0.5, 0.5] }
    }

    pub fn moment(&self, p: f64) -> f64 {
        self.values.iter().zip(&self.probabilities).map(|(v, w)| w * v.abs().powf(p)).sum()
    }
}

/// Product filtration whose `k`-th level splits every atom according to the
/// law of `vars[k-1]`, with `df_k` the value of that coordinate.
pub fn product_martingale(vars: &[DiscreteVariable]) -> Result<Martingale> {
    if vars.is_empty() {
        return Err(Error::EmptyFiltration);
    }
    for (i, v) in vars.iter().enumerate() {
        if v.values.len() != v.probabilities.len() || v.values.is_empty() {
            return Err(Error::InvalidParameters(format!("variable {i}: values and probabilities differ in length")));
        }
        if v.probabilities.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::InvalidParameters(format!("variable {i}: probabilities must be positive")));
        }
    }
    let mut levels = Vec::with_capacity(vars.len());
    let mut weights = vec![1.0];
    for v in vars {
        let mut parents = Vec::with_capacity(weights.len() * v.values.len());
        let mut next = Vec::with_capacity(parents.capacity());
        for (p, w) in weights.iter().enumerate() {
            for q in &v.probabilities {
                parents.push(p);
                next.push(w * q);
            }
        }
        levels.push(parents);
        weights = next;
    }
    let tree = Arc::new(FiltrationTree::build(&TreeDescription { levels, leaf_weights: weights })?);
    let diffs = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let k = i + 1;
            let b = v.values.len();
            AdaptedFunction::new(&tree, k, (0..tree.atom_count(k)).map(|a| v.values[a % b]).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Martingale::from_differences(tree, 0.0, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_family_weights_are_interval_lengths() {
        let phi = phi_family(3).unwrap();
        let w = phi.tree.measures(1);
        assert!((w[0] - 0.5).abs() < 1e-15);
        assert!((w[1] - 1.0 / 6.0).abs() < 1e-15);
        assert!((w[2] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(phi.terms[0].values(), &[1.0, 1.0, 1.0]);
        assert_eq!(phi.terms[2].values(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn rademacher_sign_sums() {
        let f = rademacher(&[1.0, 1.0]).unwrap();
        assert_eq!(f.terminal().values(), &[2.0, 0.0, 0.0, -2.0]);
        assert_eq!(f.f0(), 0.0);
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [GeneratorKind::Dyadic, GeneratorKind::RandomTree, GeneratorKind::Rademacher] {
            let spec = CorpusSpec { kind, depth: 4, max_branching: 3, skew: 0.5, ..Default::default() };
            let a = generate(&spec, 5).unwrap();
            let b = generate(&spec, 5).unwrap();
            assert_eq!(a, b);
            let c = generate(&spec, 6).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn random_tree_branching_respects_bounds() {
        let spec = CorpusSpec { kind: GeneratorKind::RandomTree, depth: 3, max_branching: 3, skew: 0.3, ..Default::default() };
        let inst = generate(&spec, 0).unwrap();
        let tree = inst.sequence.tree();
        for level in 0..tree.depth() {
            for atom in 0..tree.atom_count(level) {
                let b = tree.children(level, atom).len();
                assert!((2..=3).contains(&b));
            }
        }
    }

    #[test]
    fn spec_validation() {
        let bad = CorpusSpec { count: 0, ..Default::default() };
        assert!(generate(&bad, 0).is_err());
        let bad = CorpusSpec { kind: GeneratorKind::RandomTree, max_branching: 1, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!("spiral".parse::<GeneratorKind>().is_err());
    }

    #[test]
    fn product_martingale_rejects_uncentred_variables() {
        let ok = product_martingale(&[DiscreteVariable::rademacher(1.0), DiscreteVariable::rademacher(2.0)]);
        assert!(ok.is_ok());
        let skewed = DiscreteVariable { values: vec![1.0, 0.0], probabilities: vec![0.5, 0.5] };
        assert!(product_martingale(&[skewed]).is_err());
    }
}
