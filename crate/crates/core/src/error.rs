//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    #[error("point set contains duplicate points")]
    DuplicatePoints,

    #[error("simplex needs {expected} vertices, got {got}")]
    WrongVertexCount { expected: usize, got: usize },

    #[error("degenerate simplex: vertices are affinely dependent within tolerance")]
    DegenerateSimplex,

    #[error("need at least {needed} points, got {got}")]
    NotEnoughPoints { needed: usize, got: usize },

    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),

    #[error("direction must be a unit vector (norm {0})")]
    NonUnitDirection(f64),

    #[error("step schedule must be strictly decreasing and positive")]
    InvalidStepSchedule,

    #[error("mesh width must be positive, got {0}")]
    InvalidMesh(f64),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error(
        "rejection sampling acceptance ratio below 1e-6 ({accepted} accepted in {attempts} attempts); body too thin relative to its bounding box"
    )]
    RejectionTooThin { attempts: u64, accepted: u64 },

    #[error("exact degree mode supports n <= {cap} in dimension {dim}, got n = {n}; use local mode")]
    ExactCapExceeded { n: usize, cap: usize, dim: usize },

    #[error("pinned point lies outside the body")]
    PinnedOutsideBody,

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
