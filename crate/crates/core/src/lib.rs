//! Closed-form photoionization transition integrals between real Gaussian
//! bound states and continuum states represented by complex Gaussians.

// NaN must fail validation, so `!(x > 0.0)` is deliberate; quadrature and
// double-double constants carry more digits than f64 on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::manual_is_multiple_of)]

pub mod cgtf;
pub mod continuum;
mod dd;
pub mod error;
pub mod fit;
pub mod identities;
pub mod oracle;
pub mod quadrature;
pub mod sgtf;
pub mod special;
pub mod state;
pub mod sum;
pub mod types;

pub use continuum::{ContinuumSpec, TransitionResult};
pub use error::{Error, Result};
pub use fit::{build_targets, fit_basis, ComplexGaussianBasis, FitOptions, GridPolicy, RadialGrid};
pub use state::{CartesianGaussianState, InitialState, SphericalGaussianState};
pub use types::{AngularIndex, Complex3Vector, Vec3};
