use num_complex::Complex64;
use thiserror::Error;

use crate::fit::ComplexGaussianBasis;

/// Errors raised by the integral engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("series did not converge after {iterations} terms (partial sum {partial}, last term magnitude {bound:e})")]
    NonConvergence {
        iterations: usize,
        partial: Complex64,
        bound: f64,
    },

    /// The optimizer finished but at least one target stayed above the residual ceiling.
    /// The best basis found is carried along so callers can still use or report it.
    #[error("fit residual {worst:e} above ceiling {ceiling:e}")]
    FitCeiling {
        best: Box<ComplexGaussianBasis>,
        worst: f64,
        ceiling: f64,
    },

    /// Adaptive quadrature stopped with an error estimate above the requested tolerance.
    #[error("quadrature error estimate {estimate:e} above tolerance {tolerance:e} (value {value})")]
    Quadrature {
        value: Complex64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("malformed basis file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
