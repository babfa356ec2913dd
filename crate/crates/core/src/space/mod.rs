//! Finite filtered probability spaces.

pub mod function;
pub mod generate;
pub mod martingale;
pub mod regularity;
pub mod rng;
pub mod tree;

pub use function::AdaptedFunction;
pub use generate::{
    corpus, generate, phi_family, product_martingale, rademacher, xi_family, CorpusSpec, DiscreteVariable,
    GeneratorKind, Instance, ValueDistribution,
};
pub use martingale::{AdaptedSequence, Martingale, Sequence};
pub use regularity::{homogeneity_constant, regularity_constant};
pub use tree::{FiltrationTree, TreeDescription};
