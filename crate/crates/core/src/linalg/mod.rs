//! Exact chain-complex algebra over Z and prime fields.

mod complex;
mod homology;
mod matrix;
mod ring;
mod snf;

use thiserror::Error;

pub use complex::{ChainComplex, ChainMap};
pub use homology::{GroupSummary, HomologySummary};
pub use matrix::{Matrix, DENSE_THRESHOLD};
pub use ring::Ring;
pub use snf::{invariants, invariants_with, smith_normal_form, smith_normal_form_with, Invariants, Method, SmithForm, SnfConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("integer overflow with big-integer fallback disabled")]
    ArithmeticOverflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d∘d is nonzero at degree {0}")]
    NotAComplex(i32),
    #[error("map does not commute with differentials at degree {0}")]
    NotAChainMap(i32),
    #[error("complexes over different coefficient rings")]
    RingMismatch,
    #[error("unknown coefficient ring {0:?}; expected Z or F<prime>")]
    UnknownRing(String),
}
