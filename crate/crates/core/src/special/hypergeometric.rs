//! Confluent hypergeometric function ₁F₁(a; b; z).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Evaluation limits for [`kummer_1f1_with`].
#[derive(Clone, Copy, Debug)]
pub struct KummerOptions {
    pub max_terms: usize,
    /// Largest accepted `|z|`.
    pub z_limit: f64,
}

impl Default for KummerOptions {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            z_limit: 500.0,
        }
    }
}

/// ₁F₁(a; b; z) with default limits.
pub fn kummer_1f1(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    kummer_1f1_with(a, b, z, &KummerOptions::default())
}

/// ₁F₁(a; b; z) by its Taylor series. For `Re z < 0` the Kummer
/// transformation `₁F₁(a;b;z) = e^z ₁F₁(b-a;b;-z)` is applied first so the
/// summed series has no sign alternation along the real axis.
///
/// Relative accuracy degrades roughly by `e^{|z| - |Re z|}` times the unit
/// roundoff when `z` is far from the real axis.
pub fn kummer_1f1_with(a: f64, b: f64, z: Complex64, opts: &KummerOptions) -> Result<Complex64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Domain(format!("1F1 with non-positive integer b = {b}")));
    }
    if !z.is_finite() || z.norm() > opts.z_limit {
        return Err(Error::Domain(format!("1F1 argument |z| = {} beyond limit {}", z.norm(), opts.z_limit)));
    }
    if z.re < 0.0 {
        return Ok(z.exp() * series(b - a, b, -z, opts)?);
    }
    series(a, b, z, opts)
}

fn series(a: f64, b: f64, z: Complex64, opts: &KummerOptions) -> Result<Complex64> {
    let mut acc = CompensatedSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    let zn = z.norm();
    let mut small_run = 0;
    for k in 0..opts.max_terms {
        let kf = k as f64;
        term *= z * ((a + kf) / ((b + kf) * (kf + 1.0)));
        acc.add(term);
        if term == Complex64::new(0.0, 0.0) {
            return Ok(acc.value());
        }
        // Only trust smallness once the term ratio has dropped below one.
        if kf + 1.0 > zn && term.norm() <= 1e-17 * acc.value().norm() {
            small_run += 1;
            if small_run >= 2 {
                return Ok(acc.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_terms,
        partial: acc.value(),
        bound: term.norm(),
    })
}
