use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function (negative degree, alpha <= -1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent mesh topology or index out of range.
    #[error("structural error: {0}")]
    Structural(String),

    /// Degenerate or inverted element map.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Unknown benchmark, bad flag combination, malformed input file.
    #[error("configuration error: {0}")]
    Config(String),

    /// A local dual mass block could not be factored.
    #[error("element degeneracy: {0}")]
    Degenerate(String),

    /// Cholesky breakdown, usually a missing boundary condition.
    #[error("matrix not positive definite on the constrained subspace: {0}")]
    Indefinite(String),

    #[error("Newton did not converge after {iterations} iterations (relative residual {relative_residual:.3e}, absolute {absolute_residual:.3e})")]
    NoConvergence {
        iterations: usize,
        relative_residual: f64,
        absolute_residual: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
