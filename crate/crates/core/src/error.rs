use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: |x - y| = {distance:e} below guard")]
    Singularity { distance: f64 },

    #[error("quadrature did not converge: value {value:e}, error estimate {error:e} after {cells} cells")]
    NonConvergence { value: f64, error: f64, cells: usize },

    #[error("sectors {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("degenerate fit: all probe values equal")]
    FitDegenerate,

    #[error("declared symmetry of order {order} violated by {residual:e}")]
    Asymmetry { order: u32, residual: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("reconstruction error {error:e} exceeds tolerance {tolerance:e}")]
    Reconstruction { error: f64, tolerance: f64 },

    #[error("point lies on a discontinuity of the source term")]
    UndefinedAtDiscontinuity,

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
