//! Spherical harmonics, solid harmonics and general harmonic polynomials,
//! all in the Condon-Shortley convention.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::special::factorial::factorial;
use crate::types::{AngularIndex, Complex3Vector, Vec3};

/// Normalized associated Legendre values `N_l^m P_l^m(cos θ)` for `m >= 0`
/// (Condon-Shortley sign included), so that `Y_l^m = value * e^{i m φ}`.
fn normalized_legendre(l: u32, m: u32, cos_t: f64, sin_t: f64) -> f64 {
    // P̄_m^m
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        pmm *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * sin_t;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = (2.0 * m as f64 + 3.0).sqrt() * cos_t * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm2 = pmm;
    for ll in (m + 2)..=l {
        let a = (((4 * ll * ll - 1) as f64) / ((ll * ll - m * m) as f64)).sqrt();
        let b = ((((ll - 1) * (ll - 1) - m * m) as f64) / ((4 * (ll - 1) * (ll - 1) - 1) as f64)).sqrt();
        let p = a * (cos_t * pm1 - b * pm2);
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// `Y_l^m(θ, φ)`.
pub fn spherical_harmonic(lm: AngularIndex, theta: f64, phi: f64) -> Complex64 {
    let (l, m) = (lm.l(), lm.m());
    let p = normalized_legendre(l, m.unsigned_abs(), theta.cos(), theta.sin());
    let y = Complex64::from_polar(p, m.unsigned_abs() as f64 * phi);
    if m >= 0 {
        y
    } else if m % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// Legendre polynomials `P_0(x) .. P_{l_max}(x)`.
pub fn legendre_polynomials(l_max: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(l_max + 1);
    p.push(1.0);
    if l_max >= 1 {
        p.push(x);
    }
    for l in 2..=l_max {
        let lf = l as f64;
        let next = ((2.0 * lf - 1.0) * x * p[l - 1] - (lf - 1.0) * p[l - 2]) / lf;
        p.push(next);
    }
    p
}

/// Solid harmonic `𝒴_l^m(r)` for `r` in C^3, as the finite polynomial sum
///
/// ```text
/// 𝒴_l^m(r) = sqrt((2l+1)/(4π) (l+m)! (l-m)!)
///            Σ_k (-x - iy)^{k+m} (x - iy)^k z^{l-2k-m} / (2^{2k+m} (k+m)! k! (l-m-2k)!)
/// ```
///
/// For real `r` this equals `r^l Y_l^m(r̂)`.
pub fn solid_harmonic(lm: AngularIndex, r: &Complex3Vector) -> Complex64 {
    let (l, m) = (lm.l() as i64, lm.m() as i64);
    let pre = ((2 * l + 1) as f64 / (4.0 * PI)
        * factorial((l + m) as u32)
        * factorial((l - m) as u32))
    .sqrt();
    let i = Complex64::i();
    let plus = -r.x - i * r.y;
    let minus = r.x - i * r.y;
    let mut sum = Complex64::new(0.0, 0.0);
    let k_min = 0.max(-m);
    let mut k = k_min;
    while l - m - 2 * k >= 0 {
        let den = 2f64.powi((2 * k + m) as i32)
            * factorial((k + m) as u32)
            * factorial(k as u32)
            * factorial((l - m - 2 * k) as u32);
        let num = ipow(plus, (k + m) as u32) * ipow(minus, k as u32) * ipow(r.z, (l - 2 * k - m) as u32);
        sum += num / den;
        k += 1;
    }
    sum * pre
}

/// Solid harmonic of a real vector via `|r|^l Y_l^m(r̂)`; at the origin only
/// `l = 0` survives.
pub fn solid_harmonic_real(lm: AngularIndex, r: Vec3) -> Complex64 {
    let rho2 = r[0] * r[0] + r[1] * r[1];
    let len = (rho2 + r[2] * r[2]).sqrt();
    if len == 0.0 {
        return if lm.l() == 0 {
            Complex64::new(1.0 / (4.0 * PI).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let cos_t = r[2] / len;
    let sin_t = rho2.sqrt() / len;
    let phi = r[1].atan2(r[0]);
    let (l, m) = (lm.l(), lm.m());
    let p = normalized_legendre(l, m.unsigned_abs(), cos_t, sin_t) * len.powi(l as i32);
    let y = Complex64::from_polar(p, m.unsigned_abs() as f64 * phi);
    if m >= 0 {
        y
    } else if m % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// General harmonic polynomial `𝕐^n_{lm}(r) = (r·r)^n 𝒴_l^m(r)` with the
/// unconjugated product `r·r = x² + y² + z²`.
pub fn harmonic_polynomial(n: u32, lm: AngularIndex, r: &Complex3Vector) -> Complex64 {
    ipow(r.self_dot(), n) * solid_harmonic(lm, r)
}

/// Real-argument counterpart of [`harmonic_polynomial`].
pub fn harmonic_polynomial_real(n: u32, lm: AngularIndex, r: Vec3) -> Complex64 {
    let rr = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    solid_harmonic_real(lm, r) * rr.powi(n as i32)
}

/// Integer power with `0^0 = 1`.
pub(crate) fn ipow(z: Complex64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}
