//! Davis, Gundy, Krickeberg and related decompositions of finite martingales.
//!
//! All sets are read off the running maximum `f_k^* = max_{j ≤ k} |f_j|` with
//! `f_0^* = |f_0|`. Indicator comparisons are taken exactly as written: strict
//! `<` on the `g` side of Davis, `≥` on the `h` side, `≤ λ` for Gundy's `β`
//! and `> λ` for `α`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{AdaptedFunction, FiltrationTree, Martingale};
use crate::tolerances::{RECONSTRUCTION, REGULAR_TIE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    Davis,
    RegularDavis,
    /// Built elsewhere (search, user input) and checked to decompose `f`.
    Custom,
}

/// `f = g + h` with both parts martingales on the same filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingalePair {
    pub g: Martingale,
    pub h: Martingale,
    pub kind: PairKind,
}

impl MartingalePair {
    /// Checks `g_0 + h_0 = f_0` and `dg_k + dh_k = df_k`.
    pub fn new(f: &Martingale, g: Martingale, h: Martingale, kind: PairKind) -> Result<Self> {
        let pair = Self { g, h, kind };
        pair.check_decomposes(f)?;
        Ok(pair)
    }

    pub fn dg(&self) -> Vec<AdaptedFunction> {
        self.g.differences()
    }

    pub fn dh(&self) -> Vec<AdaptedFunction> {
        self.h.differences()
    }

    pub fn check_decomposes(&self, f: &Martingale) -> Result<()> {
        check_same_tree(f.tree(), self.g.tree())?;
        check_same_tree(f.tree(), self.h.tree())?;
        let parts = [self.g.differences(), self.h.differences()];
        check_reconstruction(f, self.g.f0() + self.h.f0(), &parts)
    }
}

/// Gundy's single-stopping-time decomposition `f = α + β + γ` at threshold `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GundyTriple {
    pub alpha: Martingale,
    pub beta: Martingale,
    pub gamma: Martingale,
    pub lambda: f64,
}

impl GundyTriple {
    pub fn check_decomposes(&self, f: &Martingale) -> Result<()> {
        let parts = [self.alpha.differences(), self.beta.differences(), self.gamma.differences()];
        check_reconstruction(f, self.alpha.f0() + self.beta.f0() + self.gamma.f0(), &parts)
    }
}

/// The uncentred split of `df_k` along the Davis sets.
#[derive(Debug, Clone, PartialEq)]
pub struct NonMartingalePair {
    pub dg: Vec<AdaptedFunction>,
    pub dh: Vec<AdaptedFunction>,
}

fn check_same_tree(a: &Arc<FiltrationTree>, b: &Arc<FiltrationTree>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::InvalidParameters("decomposition lives on a different filtration".into()))
    }
}

fn check_reconstruction(f: &Martingale, start: f64, parts: &[Vec<AdaptedFunction>]) -> Result<()> {
    let scale = f.levels().iter().map(AdaptedFunction::max_abs).fold(f.f0().abs(), f64::max).max(1.0);
    let tol = RECONSTRUCTION * scale;
    let deviation = (start - f.f0()).abs();
    if deviation > tol {
        return Err(Error::NotADecomposition { level: 0, deviation });
    }
    for (i, df) in f.differences().iter().enumerate() {
        let mut sum = vec![0.0; df.values().len()];
        for part in parts {
            for (s, v) in sum.iter_mut().zip(part[i].values()) {
                *s += v;
            }
        }
        let deviation = sum.iter().zip(df.values()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if deviation > tol {
            return Err(Error::NotADecomposition { level: i + 1, deviation });
        }
    }
    Ok(())
}

/// `d − E_{k−1} d` for `d` at level `k`.
pub(crate) fn center(tree: &FiltrationTree, d: &AdaptedFunction) -> AdaptedFunction {
    let k = d.level();
    let mean = tree.conditional_expectation(d, k - 1).expect("level ≥ 1");
    let mean = tree.broadcast(&mean, k).expect("valid level");
    d.zip_with(&mean, |a, b| a - b).expect("same level")
}

fn restrict(d: &AdaptedFunction, keep: impl Fn(usize) -> bool) -> AdaptedFunction {
    let values = d.values().iter().enumerate().map(|(i, &v)| if keep(i) { v } else { 0.0 }).collect();
    AdaptedFunction::from_raw(d.level(), values)
}

fn assemble(f: &Martingale, f0: f64, diffs: Vec<AdaptedFunction>) -> Martingale {
    Martingale::from_differences(Arc::clone(f.tree()), f0, diffs).expect("centred differences form a martingale")
}

/// `f_{k−1}^*` and `f_k^*` on the atoms of level `k`, for `k = 1..N`.
fn maximal_pairs(f: &Martingale) -> Vec<(AdaptedFunction, AdaptedFunction)> {
    let tree = f.tree();
    let star = f.maximal_all();
    (1..=f.depth()).map(|k| (tree.broadcast(&star[k - 1], k).expect("valid level"), star[k].clone())).collect()
}

/// Uncentred Davis split: `df_k χ{f_k^* < 2f_{k−1}^*}` and `df_k χ{f_k^* ≥ 2f_{k−1}^*}`.
pub fn corollary_c_split(f: &Martingale) -> NonMartingalePair {
    let mut dg = Vec::with_capacity(f.depth());
    let mut dh = Vec::with_capacity(f.depth());
    for (df, (prev, cur)) in f.differences().iter().zip(maximal_pairs(f)) {
        let small = |i: usize| cur.values()[i] < 2.0 * prev.values()[i];
        dg.push(restrict(df, small));
        dh.push(restrict(df, |i| !small(i)));
    }
    NonMartingalePair { dg, dh }
}

/// Davis decomposition: the split of [`corollary_c_split`], each part centred.
pub fn davis(f: &Martingale) -> MartingalePair {
    let split = corollary_c_split(f);
    let tree = f.tree();
    let dg = split.dg.iter().map(|d| center(tree, d)).collect();
    let dh = split.dh.iter().map(|d| center(tree, d)).collect();
    MartingalePair { g: assemble(f, f.f0(), dg), h: assemble(f, 0.0, dh), kind: PairKind::Davis }
}

/// Gundy decomposition at threshold `λ > 0`.
///
/// `dα_k = df_k χ{f_{k−1}^* > λ}`; `dβ_k` and `dγ_k` are the centred pieces
/// of `df_k` on `{f_k^* ≤ λ}` and `{f_{k−1}^* ≤ λ < f_k^*}`. `β_0 = f_0`.
pub fn gundy(f: &Martingale, lambda: f64) -> Result<GundyTriple> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::BadThreshold(lambda));
    }
    let tree = f.tree();
    let (mut da, mut db, mut dc) = (Vec::new(), Vec::new(), Vec::new());
    for (df, (prev, cur)) in f.differences().iter().zip(maximal_pairs(f)) {
        let (p, c) = (prev.values(), cur.values());
        da.push(restrict(df, |i| p[i] > lambda));
        db.push(center(tree, &restrict(df, |i| c[i] <= lambda)));
        dc.push(center(tree, &restrict(df, |i| p[i] <= lambda && lambda < c[i])));
    }
    Ok(GundyTriple { alpha: assemble(f, 0.0, da), beta: assemble(f, f.f0(), db), gamma: assemble(f, 0.0, dc), lambda })
}

/// Positive and negative parts: the closures of `f_N^+` and `f_N^−`.
pub fn krickeberg(f: &Martingale) -> (Martingale, Martingale) {
    let close = |x: AdaptedFunction| Martingale::from_terminal(Arc::clone(f.tree()), x).expect("leaf-level terminal");
    (close(f.terminal().map(|v| v.max(0.0))), close(f.terminal().map(|v| (-v).max(0.0))))
}

/// Davis variant for regular filtrations: `dg_k` is the centred part of
/// `df_k` on `{f_k ≤ k f_{k−1}}`.
///
/// Comparisons carry a relative slack of [`REGULAR_TIE`] towards `g`.
pub fn regular_davis(f: &Martingale, k: f64) -> Result<MartingalePair> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParameters(format!("regularity constant must be ≥ 1, got {k}")));
    }
    let tree = f.tree();
    for level in 1..=f.depth() {
        let min = f.level(level).min_value();
        if min < 0.0 {
            return Err(Error::NegativeInput { level, value: min, hint: "split with krickeberg first" });
        }
    }
    let (mut dg, mut dh) = (Vec::new(), Vec::new());
    for (i, df) in f.differences().iter().enumerate() {
        let level = i + 1;
        let prev = tree.broadcast(&f.level(level - 1), level)?;
        let cur = f.level(level);
        let small = |a: usize| cur.values()[a] <= k * prev.values()[a] * (1.0 + REGULAR_TIE);
        dg.push(center(tree, &restrict(df, small)));
        dh.push(center(tree, &restrict(df, |a| !small(a))));
    }
    Ok(MartingalePair { g: assemble(f, f.f0(), dg), h: assemble(f, 0.0, dh), kind: PairKind::RegularDavis })
}
