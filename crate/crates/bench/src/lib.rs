//! Shared fixtures for the benchmarks.

use cgint::ComplexGaussianBasis;
use num_complex::Complex64;

/// Deterministic basis with production dimensions. Timing does not depend on
/// fit quality, so a fit is not needed.
pub fn production_sized_basis(n: usize, l_max: u32, energies: Vec<f64>) -> ComplexGaussianBasis {
    let exponents: Vec<Vec<Complex64>> = (0..=l_max)
        .map(|l| {
            (0..n)
                .map(|s| {
                    let t = s as f64 / n as f64;
                    Complex64::new(1e-3 * 1e3f64.powf(t), 0.02 + 0.4 * t) * (1.0 + 0.05 * l as f64)
                })
                .collect()
        })
        .collect();
    let coefficients = (0..=l_max as usize)
        .map(|l| {
            (0..energies.len())
                .map(|k| {
                    (0..n)
                        .map(|s| {
                            let t = (l * 31 + k * 7 + s) as f64;
                            Complex64::new((0.7 * t).sin(), (1.3 * t).cos())
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    ComplexGaussianBasis::from_parts(25.0, 1.0, energies, exponents, coefficients).expect("valid basis")
}
