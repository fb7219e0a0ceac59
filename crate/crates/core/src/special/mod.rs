//! Angular and radial special functions consumed by the closed forms.

pub mod coulomb;
pub mod factorial;
pub mod gaunt;
pub mod harmonics;
pub mod hypergeometric;

pub use coulomb::{coulomb_phase, coulomb_wave, coulomb_wave_many, spherical_bessel_j, RegularCoulomb};
pub use factorial::{binomial, double_factorial, factorial, ln_double_factorial, ln_factorial, ln_gamma, ln_gamma_complex, ln_gamma_half};
pub use gaunt::{gaunt, gaunt_coefficient, wigner_3j};
pub use harmonics::{
    harmonic_polynomial, harmonic_polynomial_real, legendre_polynomials, solid_harmonic, solid_harmonic_real,
    spherical_harmonic,
};
pub use hypergeometric::{kummer_1f1, kummer_1f1_with, KummerOptions};
