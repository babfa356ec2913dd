//! Numerical tolerances used across the crate.

/// Leaf weights must sum to 1 within this absolute error.
pub const WEIGHT_SUM: f64 = 1e-12;

/// Tower property `E_{k-1} f_k = f_{k-1}`, relative to the largest value.
pub const TOWER_RELATIVE: f64 = 1e-9;

/// Slack allowed when comparing against a bound with an explicit constant,
/// relative to the natural scale of the bound (`‖f‖_1`, `√λ`, `λ`, …).
pub const PAPER_CAP_SLACK: f64 = 1e-12;

/// Slack allowed when comparing against a frozen calibrated cap.
pub const CALIBRATED_CAP_SLACK: f64 = 1e-9;

/// Decomposition identities `dg_k + dh_k = df_k`.
pub const RECONSTRUCTION: f64 = 1e-12;

/// Relative slack on `f_k ≤ k f_{k−1}` in the regular Davis split, so that
/// rounding in `k` or in the closure does not push boundary atoms into `h`.
pub const REGULAR_TIE: f64 = 1e-12;
