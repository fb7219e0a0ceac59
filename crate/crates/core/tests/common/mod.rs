#![allow(dead_code)]

use cgint::ComplexGaussianBasis;
use num_complex::Complex64;

/// A small hand-made basis (l <= 5, two energies) that exercises complex
/// exponents and coefficients without running a fit.
pub fn synthetic_basis() -> ComplexGaussianBasis {
    let base = [
        Complex64::new(0.31, 0.22),
        Complex64::new(0.06, -0.11),
        Complex64::new(1.2, 0.7),
        Complex64::new(0.025, 0.045),
    ];
    let exponents: Vec<Vec<Complex64>> = (0..=5)
        .map(|l| base.iter().map(|a| a * (1.0 + 0.1 * l as f64)).collect())
        .collect();
    let coefficients = (0..=5)
        .map(|l| {
            (0..2)
                .map(|k| {
                    (0..4)
                        .map(|s| {
                            let t = (l * 7 + k * 3 + s) as f64;
                            Complex64::new((0.7 * t).sin(), (1.3 * t + 0.4).cos()) * 0.5
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    ComplexGaussianBasis::from_parts(25.0, 1.0, vec![0.5, 1.25], exponents, coefficients).unwrap()
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
