//! Factorials, double factorials, binomials and the log-gamma function.
//!
//! Everything that feeds the angular and radial sums goes through the
//! log-domain helpers here so that terms with `l` up to a few dozen stay
//! representable.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TABLE_LEN: usize = 171;

fn factorial_table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; TABLE_LEN];
        for n in 1..TABLE_LEN {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// `n!` as a float; `+inf` once it overflows (n > 170).
pub fn factorial(n: u32) -> f64 {
    factorial_table()
        .get(n as usize)
        .copied()
        .unwrap_or(f64::INFINITY)
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> f64 {
    match factorial_table().get(n as usize) {
        Some(f) => f.ln(),
        None => ln_gamma(n as f64 + 1.0),
    }
}

/// `ln n!!` for `n >= -1`, with `(-1)!! = 0!! = 1`.
pub fn ln_double_factorial(n: i64) -> Result<f64> {
    if n < -1 {
        return Err(Error::Domain(format!("double factorial of {n}")));
    }
    if n <= 0 {
        return Ok(0.0);
    }
    let n = n as u32;
    let k = n.div_ceil(2);
    if n % 2 == 0 {
        // (2k)!! = 2^k k!
        Ok(k as f64 * std::f64::consts::LN_2 + ln_factorial(k))
    } else {
        // (2k-1)!! = (2k)! / (2^k k!)
        Ok(ln_factorial(2 * k) - k as f64 * std::f64::consts::LN_2 - ln_factorial(k))
    }
}

/// `n!!` for `n >= -1`. Small arguments use the exact product; larger ones
/// are exponentiated from the log-domain value.
pub fn double_factorial(n: i64) -> Result<f64> {
    if n < -1 {
        return Err(Error::Domain(format!("double factorial of {n}")));
    }
    if n <= 30 {
        let mut p = 1.0;
        let mut k = n;
        while k > 1 {
            p *= k as f64;
            k -= 2;
        }
        return Ok(p);
    }
    Ok(ln_double_factorial(n)?.exp())
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
///
/// Exact integer arithmetic while the result fits; log-gamma otherwise.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 66 {
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (n as u128 - i) / (i + 1);
        }
        return acc as f64;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
        .exp()
        .round()
}

/// `ln Γ(h/2)` for a positive integer `h`, evaluated exactly through factorials.
pub fn ln_gamma_half(h: u32) -> f64 {
    assert!(h > 0, "Γ(0) is undefined");
    if h % 2 == 0 {
        ln_factorial(h / 2 - 1)
    } else {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let n = (h - 1) / 2;
        ln_factorial(2 * n) - ln_factorial(n) - 2.0 * n as f64 * std::f64::consts::LN_2
            + 0.5 * PI.ln()
    }
}

// Bernoulli-number coefficients B_{2k} / (2k (2k - 1)) of the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

const STIRLING_SHIFT: f64 = 16.0;

/// Log-gamma on the right half-plane, continuous along vertical lines.
///
/// The argument is shifted upward by the functional equation until
/// `Re z >= 16`, where eight Stirling terms are below machine precision. Each
/// shift contributes a principal logarithm of a number with positive real
/// part, so the imaginary part varies continuously with `Im z`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z) Γ(1 - z) = π / sin(π z).
        let s = (Complex64::from(PI) * z).sin();
        return Complex64::from(PI.ln()) - s.ln() - ln_gamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < STIRLING_SHIFT {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Real log-gamma for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_small_values() {
        assert_eq!(double_factorial(-1).unwrap(), 1.0);
        assert_eq!(double_factorial(0).unwrap(), 1.0);
        assert_eq!(double_factorial(5).unwrap(), 15.0);
        assert_eq!(double_factorial(8).unwrap(), 384.0);
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn double_factorial_large_matches_log_domain() {
        for n in [31_i64, 45, 60, 61, 99] {
            let direct: f64 = (1..=n).rev().step_by(2).map(|k| k as f64).product();
            let v = double_factorial(n).unwrap();
            assert!((v / direct - 1.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn binomials_exact() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(60, 30), 118264581564861424.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(0, 0), 1.0);
    }

    #[test]
    fn ln_gamma_half_integers() {
        assert!((ln_gamma_half(1) - 0.5 * PI.ln()).abs() < 1e-15);
        assert!((ln_gamma_half(3) - (0.5 * PI.sqrt()).ln()).abs() < 1e-15);
        assert!((ln_gamma_half(10) - 24f64.ln()).abs() < 1e-14);
        for h in 1..60 {
            let g = ln_gamma(h as f64 / 2.0);
            assert!((g - ln_gamma_half(h)).abs() < 1e-12 * g.abs().max(1.0), "h = {h}");
        }
    }

    #[test]
    fn ln_gamma_complex_reference_values() {
        // Im ln Γ(l + 1 + iη), reference values from 30-digit arithmetic.
        let cases = [
            (0.0, -1.0, 0.30164032046753319789),
            (5.0, -2.0, -3.4543497871620656778),
            (12.0, -10.0, -26.16665491349665378),
        ];
        for (l, eta, want) in cases {
            let got = ln_gamma_complex(Complex64::new(l + 1.0, eta)).im;
            assert!((got - want).abs() < 1e-13, "l={l} eta={eta}: {got} vs {want}");
        }
        let g = ln_gamma_complex(Complex64::new(0.3, 0.0)).re;
        assert!((g - 1.0957979948180752).abs() < 1e-14);
    }
}
