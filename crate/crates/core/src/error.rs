//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },

    #[error("dimension {0} is not a multiple of 4")]
    NotQuaternionic(usize),

    #[error("interior product of a degree-0 form is undefined")]
    InteriorOfScalar,

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("metric is singular at the evaluation point")]
    SingularMetric,

    #[error("point too close to the excluded set: distance {distance:.3e}, required {required:.3e}")]
    SingularProximity { distance: f64, required: f64 },

    #[error("path intersects the excluded set")]
    PathThroughSingularSet,

    #[error("degenerate map: (p1, p2) = (0, 0)")]
    DegenerateTau,

    #[error("map weight must be positive, got {0}")]
    InvalidWeight(f64),

    #[error("frame is not orthonormal: deviation {0:.3e}")]
    NotOrthonormal(f64),

    #[error("quadrature too coarse: estimated relative error {0:.3e}")]
    QuadratureTooCoarse(f64),

    #[error("too few maximizers for dimension estimation: {got}, need {need}")]
    TooFewMaximizers { got: usize, need: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
