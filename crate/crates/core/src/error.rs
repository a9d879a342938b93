use thiserror::Error;

use crate::state::Space;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("{what} index {index} out of range 0..{bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("lattice side must be positive")]
    EmptyLattice,

    #[error("expected a {expected:?}-space state, got {found:?}")]
    SpaceMismatch { expected: Space, found: Space },

    #[error("support reaches the boundary of the radius-{radius} window")]
    BoundaryContact { radius: usize },

    #[error("amplitude is not normalized (norm {norm:.6e})")]
    NotNormalized { norm: f64 },

    #[error("eigen-decomposition failed: {0}")]
    Eigen(String),

    #[error("characteristic polynomial carries no Fourier shift tag")]
    MissingShiftTag,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WalkError>;
