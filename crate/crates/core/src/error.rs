//! Error type shared across the crate.

use thiserror::Error;

/// Hard cap on kernel degrees. Factorials up to this degree fit in `u128`
/// exactly, which keeps every combinatorial weight an exact integer before
/// the final conversion to `f64`.
pub const DEGREE_CAP: usize = 32;

/// Everything that can go wrong when assembling or combining kernels,
/// measures, and systems.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree {0} exceeds the supported cap {DEGREE_CAP}")]
    DegreeCap(usize),

    #[error("contraction degree {low} exceeds kernel degree {high}")]
    ContractionDegree { low: usize, high: usize },

    #[error("point has dimension {got}, kernel lives over dimension {want}")]
    PointDimension { got: usize, want: usize },

    #[error("invalid weight model: {0}")]
    InvalidWeight(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("measure mismatch: {left} vs {right}")]
    MeasureMismatch { left: String, right: String },

    #[error("sequence is in the {got} basis, expected {expected}")]
    BasisMismatch { expected: String, got: String },

    #[error("moments available through degree {available}, operation needs degree {needed}")]
    MissingMoments { available: usize, needed: usize },

    #[error("measure {0} carries no quadrature rule")]
    MissingQuadrature(String),

    #[error("density integrates to {integral:.9} over the given support (expected 1 within {tol:e})")]
    DensityNotNormalized { integral: f64, tol: f64 },

    #[error("density derivative of order {0} is not available for this density")]
    DensityDerivative(usize),

    #[error("series guard: |l_mu(theta)| = {value:e} is below the threshold {threshold:e}")]
    GuardRadius { value: f64, threshold: f64 },

    #[error("Wick inverse needs a nonzero constant term")]
    ZeroConstantTerm,

    #[error("Wick series must be expanded about the constant term of its argument")]
    ExpansionPoint,

    #[error("malformed kernel sequence: {0}")]
    MalformedSequence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
