//! Error type shared by the whole workbench.
//!
//! The CLI maps these onto its exit-code contract: falsifiers and internal
//! cross-check disagreements are exit 1, malformed input is exit 2, budget
//! and cap refusals are exit 3.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("shape mismatch: {what}")]
    ShapeMismatch { what: String },

    #[error("input error: {0}")]
    Input(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("algebra dimension {dim} is not below the field prime {p}")]
    DimensionExceedsPrime { dim: usize, p: u64 },

    #[error("relations not confluent; supply a completed reduction system: {diagnostic}")]
    NotConfluent { diagnostic: String },

    #[error("relations do not generate an admissible ideal: {0}")]
    NotAdmissible(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("values belong to different algebras")]
    AlgebraMismatch,

    #[error("subcategory is not rigid: {witness}")]
    NotRigid { witness: String },

    #[error("X is weak cluster tilting; nothing to complete")]
    AlreadyComplete,

    #[error("cone not two-term after reduction")]
    ConeNotTwoTerm,

    #[error("incomplete atlas: {0}; exhaustive verification refused")]
    IncompleteAtlas(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("internal cross-check disagreement: {0}")]
    CrossCheck(String),
}
