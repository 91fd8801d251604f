use thiserror::Error;

/// Errors raised by the geometric kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid mesh level {0}: must be at least 1")]
    InvalidLevel(usize),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("origin has no polar form")]
    Origin,

    #[error("radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),

    #[error("degenerate input: affine rank {rank} is below the required {required}")]
    Degenerate { rank: usize, required: usize },

    #[error("unbounded intersection: recession direction {witness:?}")]
    Unbounded { witness: Vec<f64> },

    #[error("half-space offset must be positive, got {0}")]
    NonPositiveOffset(f64),

    #[error("origin is not an interior point of the body")]
    OriginNotInterior,

    #[error("arc undefined for antipodes")]
    AntipodalArc,

    #[error("projection blows up: last coordinate {0} is not positive")]
    ProjectionBlowUp(f64),

    #[error("psi_N undefined at or near the poles (N.P = {0})")]
    AtPole(f64),

    #[error("empty point set")]
    Empty,

    #[error("point set is not hemispherical")]
    NotHemispherical,

    #[error("polar set has empty interior")]
    EmptyPolarInterior,

    #[error("point lies outside the body")]
    PointOutside,

    #[error("generator sets are not nested")]
    NotNested,

    #[error("invalid gamma field: {0}")]
    InvalidGamma(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("mismatched meshes: {0}")]
    MeshMismatch(String),

    #[error("linear program failed: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
