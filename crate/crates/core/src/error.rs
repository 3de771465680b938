use thiserror::Error;

use crate::walk::Model;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("cycle size must be at least 2, got {0}")]
    CycleTooSmall(usize),

    #[error("position {position} out of range for cycle of size {d}")]
    PositionOutOfRange { position: usize, d: usize },

    #[error("momentum index {k} out of range for cycle of size {d}")]
    MomentumOutOfRange { k: usize, d: usize },

    #[error("expected a {expected:?} state, got {found:?}")]
    ModelMismatch { expected: Model, found: Model },

    #[error("coin vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("initial state must be localized at position 0")]
    NotLocalized,

    #[error("matrix is not unitary (max deviation {0:e})")]
    NonUnitary(f64),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("limiting probability has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("distribution sizes differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown initial state {0:?}")]
    UnknownState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, WalkError>;
