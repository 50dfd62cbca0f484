use thiserror::Error;

/// Errors produced by kernel, cubature, and frame construction.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A point failed the on-domain membership check.
    #[error("point not on domain: {0}")]
    OffDomain(String),

    /// The weight density is singular at the requested point.
    #[error("weight singular at {0}")]
    SingularWeight(String),

    /// A requested degree exceeds what a precomputed evaluator supports.
    #[error("degree {requested} exceeds capacity {capacity}")]
    Capacity { requested: usize, capacity: usize },

    /// A grid or quadrature cannot resolve the requested scale.
    #[error("resolution too coarse: {0}")]
    Resolution(String),

    /// Nonnegative weights could not be certified at this separation.
    #[error("cubature infeasible at delta {delta:.6}: residual {residual:.3e}")]
    Infeasible { delta: f64, residual: f64 },

    /// The operation is not implemented for this domain/dimension combination.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two objects that must belong together do not match.
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
