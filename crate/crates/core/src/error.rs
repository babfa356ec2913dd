use thiserror::Error;

/// Validation and domain errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("filtration must have depth >= 1")]
    EmptyFiltration,

    #[error("level {level} has no atoms")]
    EmptyLevel { level: usize },

    #[error("atom {atom} at level {level} points to missing parent {parent}")]
    OrphanAtom { level: usize, atom: usize, parent: usize },

    #[error("atom {atom} at level {level} has no children")]
    ChildlessAtom { level: usize, atom: usize },

    #[error("leaf weight {index} is {weight}; weights must be strictly positive and finite")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("leaf weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("expected {expected} values at level {level}, got {got}")]
    LengthMismatch { level: usize, expected: usize, got: usize },

    #[error("non-finite value at level {level}, atom {atom}")]
    NonFinite { level: usize, atom: usize },

    #[error("level {level} out of range (depth {depth})")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("cannot project level {from} onto finer level {to}")]
    BadProjection { from: usize, to: usize },

    #[error("tower property fails at level {level} (deviation {deviation:e})")]
    NotAMartingale { level: usize, deviation: f64 },

    #[error("sequence is an adapted family, not a martingale")]
    NotMartingaleSequence,

    #[error("functions live on different levels ({left} vs {right})")]
    LevelMismatch { left: usize, right: usize },

    #[error("exponent p = {0} is not allowed here")]
    BadExponent(f64),

    #[error("threshold lambda = {0} must be positive")]
    BadThreshold(f64),

    #[error("negative value {value} at level {level}; {hint}")]
    NegativeInput { level: usize, value: f64, hint: &'static str },

    #[error("pair does not decompose the martingale (deviation {deviation:e} at level {level})")]
    NotADecomposition { level: usize, deviation: f64 },

    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),

    #[error("filtration is not a product space at level {level}")]
    NonProduct { level: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("search invariant violated: {0}")]
    InvariantViolated(String),

    #[error("document schema `{found}` does not match `{expected}`")]
    SchemaMismatch { found: String, expected: &'static str },

    #[error("malformed document: {0}")]
    MalformedDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
