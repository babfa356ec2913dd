//! Exact martingale decompositions and weak-type inequality checks on finite
//! filtered probability spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`space`]: filtrations as rooted measure trees, adapted functions,
//!   martingales, regularity diagnostics and instance generators;
//! - [`norms`]: `L_p`, weak-`L_1` (on `Ω` and on the disjoint union
//!   `Ω_⊕∞`), conditional square function and `p`-variation;
//! - [`decomp`]: Davis, Gundy, Krickeberg and related decompositions;
//! - [`verify`]: ratio reports, proof traces and the corpus suite;
//! - [`search`]: derivative-free search for extremal martingales and
//!   decompositions;
//! - [`document`]: the `mgf-1` JSON document format.

pub mod decomp;
pub mod document;
pub mod error;
pub mod norms;
pub mod parallel;
pub mod search;
pub mod space;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
