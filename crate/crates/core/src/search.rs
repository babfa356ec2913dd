//! Derivative-free search: adversarial martingales for the ratio checks and
//! cheap decompositions for the lower Burkholder bracket.
//!
//! Both searches are random-restart coordinate searches. One coordinate gets a
//! Gaussian kick, the move is kept only if it improves the objective, and the
//! kick size decays geometrically. Weak-norm objectives are piecewise linear
//! with many breakpoints, so no gradients are used.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::decomp::{davis, MartingalePair, PairKind};
use crate::error::{Error, Result};
use crate::parallel;
use crate::space::rng::instance_rng;
use crate::space::{generate, AdaptedFunction, CorpusSpec, FiltrationTree, Martingale};
use crate::verify::{
    check_bminus_upper, check_corollary_c, check_dual_doob, check_gundy_properties, check_theorem_a, check_theorem_b,
    dyadic_lambdas, theorems::absolute_differences, CapsTable, TheoremBVariant,
};

/// Relative tolerance for the per-step invariant checks.
const STEP_TOLERANCE: f64 = 1e-9;
/// Absolute bound on `E_{k−1} dg_k` after projection, relative to `max |dg|`.
const PROJECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    TheoremA,
    /// Davis split.
    TheoremB,
    CorollaryC,
    /// `max_λ` of the two Gundy `β` ratios over the dyadic grid.
    GundyII,
    DualDoob(f64),
    Bminus(f64),
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TheoremA => f.write_str("theorem_a"),
            Self::TheoremB => f.write_str("theorem_b"),
            Self::CorollaryC => f.write_str("corollary_c"),
            Self::GundyII => f.write_str("gundy_ii"),
            Self::DualDoob(p) => write!(f, "dual_doob[p={p}]"),
            Self::Bminus(p) => write!(f, "bminus[p={p}]"),
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownCheck(s.to_string());
        let with_p = |prefix: &str| -> Option<Result<f64>> {
            let rest = s.strip_prefix(prefix)?.strip_prefix("[p=")?.strip_suffix(']')?;
            Some(rest.parse::<f64>().map_err(|_| unknown()))
        };
        match s {
            "theorem_a" => Ok(Self::TheoremA),
            "theorem_b" => Ok(Self::TheoremB),
            "corollary_c" => Ok(Self::CorollaryC),
            "gundy_ii" => Ok(Self::GundyII),
            _ => {
                if let Some(p) = with_p("dual_doob") {
                    Ok(Self::DualDoob(p?))
                } else if let Some(p) = with_p("bminus") {
                    Ok(Self::Bminus(p?))
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

impl Serialize for Objective {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Objective {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub objective: Objective,
    /// The filtration is the tree of instance 0 of this corpus.
    pub filtration: CorpusSpec,
    pub iterations: usize,
    pub restarts: usize,
    /// Initial kick, relative to the typical coordinate size.
    pub initial_scale: f64,
    /// Per-iteration geometric decay of the kick, in `(0, 1)`.
    pub decay: f64,
    pub seed: u64,
    /// Re-check homogeneity and feasibility at every accepted step.
    pub check_invariants: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            objective: Objective::TheoremA,
            filtration: CorpusSpec::default(),
            iterations: 1000,
            restarts: 4,
            initial_scale: 0.5,
            decay: 0.999,
            seed: 0,
            check_invariants: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidParameters("restarts must be >= 1".into()));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::InvalidParameters(format!("decay {} outside (0, 1)", self.decay)));
        }
        if !(self.initial_scale > 0.0 && self.initial_scale.is_finite()) {
            return Err(Error::InvalidParameters(format!("initial scale {} must be positive", self.initial_scale)));
        }
        Ok(())
    }

    pub fn tree(&self) -> Result<Arc<FiltrationTree>> {
        Ok(Arc::clone(generate(&self.filtration, 0)?.martingale()?.tree()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Martingale(Martingale),
    Pair(MartingalePair),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub iteration: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub objective: Objective,
    pub value: f64,
    pub witness: Witness,
    /// Accepted steps of the winning restart, starting at iteration 0.
    pub log: Vec<LogEntry>,
    pub restart: usize,
    /// Final value of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

impl SearchResult {
    /// Log as CSV with header `iteration,value`.
    pub fn log_csv(&self) -> String {
        let mut out = String::from("iteration,value\n");
        for e in &self.log {
            out.push_str(&format!("{},{:?}\n", e.iteration, e.value));
        }
        out
    }
}

struct Run<W> {
    value: f64,
    witness: W,
    log: Vec<LogEntry>,
}

/// Keeps the best run; ties go to the lower restart index.
fn best_of<W>(runs: Vec<Result<Run<W>>>, maximize: bool) -> Result<(usize, Run<W>, Vec<f64>)> {
    let runs: Vec<Run<W>> = runs.into_iter().collect::<Result<_>>()?;
    let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        let better = if maximize { *v > values[best] } else { *v < values[best] };
        if better {
            best = i;
        }
    }
    let run = runs.into_iter().nth(best).expect("restarts >= 1");
    Ok((best, run, values))
}

fn kick(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sigma * z
}

fn check_homogeneous(label: &str, at_f: f64, at_2f: f64) -> Result<()> {
    if (at_f - at_2f).abs() > STEP_TOLERANCE * at_f.abs().max(at_2f.abs()) {
        return Err(Error::InvariantViolated(format!("{label} not scale invariant: {at_f} vs {at_2f}")));
    }
    Ok(())
}

fn ratio_of(objective: Objective, f: &Martingale) -> Result<f64> {
    let caps = CapsTable::default();
    Ok(match objective {
        Objective::TheoremA => check_theorem_a(f, false, &caps).ratio,
        Objective::TheoremB => check_theorem_b(f, TheoremBVariant::Davis, &caps).ratio,
        Objective::CorollaryC => check_corollary_c(f, &caps).ratio,
        Objective::GundyII => {
            let mut worst = 0.0_f64;
            for lambda in dyadic_lambdas(f) {
                for r in check_gundy_properties(f, lambda, &caps)? {
                    if r.id == "gundy_iia" || r.id == "gundy_iib" {
                        worst = worst.max(r.ratio);
                    }
                }
            }
            worst
        }
        Objective::DualDoob(p) => check_dual_doob(f.tree(), &absolute_differences(f), p, &caps)?.ratio,
        Objective::Bminus(_) => return Err(Error::UnknownCheck(objective.to_string())),
    })
}

/// `x / E|x|`, or `None` when `x = 0`.
fn normalized(tree: &FiltrationTree, x: &[f64]) -> Option<Vec<f64>> {
    let mass: f64 = x.iter().zip(tree.measures(tree.depth())).map(|(v, w)| v.abs() * w).sum();
    (mass > 0.0).then(|| x.iter().map(|v| v / mass).collect())
}

fn martingale_of(tree: &Arc<FiltrationTree>, x: Vec<f64>) -> Result<Martingale> {
    Martingale::from_terminal(Arc::clone(tree), AdaptedFunction::new(tree, tree.depth(), x)?)
}

fn maximize_once(tree: &Arc<FiltrationTree>, cfg: &SearchConfig, restart: usize) -> Result<Run<Martingale>> {
    let mut rng = instance_rng(cfg.seed, restart as u64);
    let n = tree.leaf_count();
    let mut x = loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(x) = normalized(tree, &raw) {
            break x;
        }
    };
    let mut f = martingale_of(tree, x.clone())?;
    let mut value = ratio_of(cfg.objective, &f)?;
    let mut log = vec![LogEntry { iteration: 0, value }];
    let mut sigma = cfg.initial_scale;
    for it in 1..=cfg.iterations {
        let i = rng.random_range(0..n);
        let mut y = x.clone();
        y[i] += kick(&mut rng, sigma);
        sigma *= cfg.decay;
        let Some(y) = normalized(tree, &y) else { continue };
        let g = martingale_of(tree, y.clone())?;
        let v = ratio_of(cfg.objective, &g)?;
        if v > value {
            if cfg.check_invariants {
                check_homogeneous(&cfg.objective.to_string(), v, ratio_of(cfg.objective, &g.scaled(2.0))?)?;
            }
            (x, f, value) = (y, g, v);
            log.push(LogEntry { iteration: it, value });
        }
    }
    Ok(Run { value, witness: f, log })
}

/// Maximizes a ratio check over terminal values on a fixed filtration,
/// normalizing `‖f_N‖_1 = 1` after every move.
pub fn maximize_ratio(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    if let Objective::Bminus(_) = cfg.objective {
        return Err(Error::UnknownCheck(cfg.objective.to_string()));
    }
    let tree = cfg.tree()?;
    let runs = parallel::map_indexed(cfg.restarts, |r| maximize_once(&tree, cfg, r));
    let (restart, run, restart_values) = best_of(runs, true)?;
    Ok(SearchResult {
        objective: cfg.objective,
        value: run.value,
        witness: Witness::Martingale(run.witness),
        log: run.log,
        restart,
        restart_values,
    })
}

/// The three starting decompositions: Davis, `(f, 0)` and `(f_0, f − f_0)`.
pub fn bminus_initializations(f: &Martingale) -> Result<[MartingalePair; 3]> {
    let tree = f.tree();
    let zeros = |f0: f64| {
        let diffs = (1..=f.depth()).map(|k| AdaptedFunction::zeros(tree, k)).collect();
        Martingale::from_differences(Arc::clone(tree), f0, diffs)
    };
    Ok([
        davis(f),
        MartingalePair::new(f, f.clone(), zeros(0.0)?, PairKind::Custom)?,
        MartingalePair::new(f, zeros(f.f0())?, f.centered(), PairKind::Custom)?,
    ])
}

/// `v − E_{k−1} v` on the atoms of level `k`.
fn project(tree: &FiltrationTree, v: &AdaptedFunction) -> Result<AdaptedFunction> {
    let k = v.level();
    let mean = tree.broadcast(&tree.conditional_expectation(v, k - 1)?, k)?;
    v.zip_with(&mean, |a, b| a - b)
}

fn pair_from(f: &Martingale, dg: &[AdaptedFunction]) -> Result<MartingalePair> {
    let tree = f.tree();
    let dh = f.differences().iter().zip(dg).map(|(d, g)| d.zip_with(g, |a, b| a - b)).collect::<Result<Vec<_>>>()?;
    let g = Martingale::from_differences(Arc::clone(tree), f.f0(), dg.to_vec())?;
    let h = Martingale::from_differences(Arc::clone(tree), 0.0, dh)?;
    MartingalePair::new(f, g, h, PairKind::Custom)
}

fn check_projection(tree: &FiltrationTree, dg: &[AdaptedFunction]) -> Result<()> {
    let scale = dg.iter().map(AdaptedFunction::max_abs).fold(1.0, f64::max);
    for d in dg {
        let e = tree.conditional_expectation(d, d.level() - 1)?;
        if e.max_abs() > PROJECTION_TOLERANCE * scale {
            return Err(Error::InvariantViolated(format!("E_(k-1) dg_k = {:e} at level {}", e.max_abs(), d.level())));
        }
    }
    Ok(())
}

fn minimize_once(f: &Martingale, p: f64, cfg: &SearchConfig, restart: usize) -> Result<Run<MartingalePair>> {
    let tree = f.tree();
    let caps = CapsTable::default();
    let objective = |pair: &MartingalePair| check_bminus_upper(f, p, pair, &caps).map(|r| r.ratio);
    let mut rng = instance_rng(cfg.seed, restart as u64);
    let mut pair = bminus_initializations(f)?[restart % 3].clone();
    let mut dg = pair.dg();
    let mut value = objective(&pair)?;
    let mut log = vec![LogEntry { iteration: 0, value }];

    let typical = f.differences().iter().map(|d| tree.integrate(&d.abs())).sum::<f64>() / f.depth() as f64;
    let mut sigma = cfg.initial_scale * if typical > 0.0 { typical } else { 1.0 };
    let f2 = f.scaled(2.0);
    for it in 1..=cfg.iterations {
        let k = rng.random_range(1..=f.depth());
        let atom = rng.random_range(0..tree.atom_count(k));
        let step = kick(&mut rng, sigma);
        sigma *= cfg.decay;
        let mut raw = dg[k - 1].values().to_vec();
        raw[atom] += step;
        let mut trial = dg.clone();
        trial[k - 1] = project(tree, &AdaptedFunction::new(tree, k, raw)?)?;
        let candidate = pair_from(f, &trial)?;
        let v = objective(&candidate)?;
        if v < value {
            if cfg.check_invariants {
                check_projection(tree, &trial)?;
                let doubled: Vec<_> = trial.iter().map(|d| d.map(|x| 2.0 * x)).collect();
                let at_2f = check_bminus_upper(&f2, p, &pair_from(&f2, &doubled)?, &caps)?.ratio;
                check_homogeneous("bminus", v, at_2f)?;
            }
            (dg, pair, value) = (trial, candidate, v);
            log.push(LogEntry { iteration: it, value });
        }
    }
    Ok(Run { value, witness: pair, log })
}

/// Upper bound for the infimum in the lower Burkholder bracket over
/// decompositions `f = g + h`, for `p ∈ (1, 2)`.
///
/// Restart `r` starts from initialization `r mod 3`, so with three or more
/// restarts the result never exceeds any of them.
pub fn minimize_bminus(f: &Martingale, p: f64, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::BadExponent(p));
    }
    let runs = parallel::map_indexed(cfg.restarts, |r| minimize_once(f, p, cfg, r));
    let (restart, run, restart_values) = best_of(runs, false)?;
    Ok(SearchResult {
        objective: Objective::Bminus(p),
        value: run.value,
        witness: Witness::Pair(run.witness),
        log: run.log,
        restart,
        restart_values,
    })
}
