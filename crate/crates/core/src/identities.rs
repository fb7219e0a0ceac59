//! Randomized self-checks of the identities the closed forms are built on.
//! Each suite draws its own samples from a seeded generator and reports the
//! worst residual next to its threshold.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cgtf::{cartesian_harmonic_coeffs, gaussian_moment, gaussian_product};
use crate::dd::{Cdd, Dd};
use crate::error::{Error, Result};
use crate::quadrature::integrate_simple;
use crate::sgtf::harmonic_polynomial_translation;
use crate::special::{
    coulomb_wave, double_factorial, gaunt_coefficient, harmonic_polynomial_real, kummer_1f1, ln_gamma,
    solid_harmonic_real, spherical_bessel_j, spherical_harmonic,
};
use crate::types::{AngularIndex, Vec3};

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub samples: usize,
    pub worst_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

type Suite = fn(&mut ChaCha8Rng) -> Result<(usize, f64)>;

const SUITES: [(&str, f64, Suite); 9] = [
    ("addition_theorem", 1e-11, addition_theorem),
    ("general_addition_theorem", 1e-11, general_addition_theorem),
    ("expansion_formula", 1e-10, expansion_formula),
    ("product_theorem", 1e-13, product_theorem),
    ("contour_shift", 1e-8, contour_shift),
    ("kummer_series", 1e-12, kummer_series),
    ("gaunt_quadrature", 1e-10, gaunt_quadrature),
    ("coulomb_free", 1e-10, coulomb_free),
    ("cartesian_expansion", 1e-12, cartesian_expansion),
];

/// Names of all suites, in run order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs the named suites (all of them when `only` is empty). Unknown names are
/// a configuration error.
pub fn run_suites(seed: u64, only: &[String]) -> Result<Vec<SuiteReport>> {
    for name in only {
        if !SUITES.iter().any(|s| s.0 == name) {
            return Err(Error::Config(format!(
                "unknown identity suite '{name}', expected one of {}",
                suite_names().join(", ")
            )));
        }
    }
    SUITES
        .iter()
        .enumerate()
        .filter(|(_, s)| only.is_empty() || only.iter().any(|n| n == s.0))
        .map(|(i, &(name, threshold, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (samples, worst) = suite(&mut rng)?;
            Ok(SuiteReport {
                name: name.to_string(),
                samples,
                worst_residual: worst,
                threshold,
                passed: worst <= threshold,
            })
        })
        .collect()
}

fn point(rng: &mut ChaCha8Rng, half: f64) -> Vec3 {
    [0, 1, 2].map(|_| rng.random_range(-half..half))
}

fn random_index(rng: &mut ChaCha8Rng, l_max: u32) -> AngularIndex {
    let l = rng.random_range(0..=l_max);
    let m = rng.random_range(-(l as i32)..=l as i32);
    AngularIndex::new(l, m).expect("m drawn within l")
}

fn odd_df(n: u32) -> f64 {
    double_factorial(n as i64).expect("non-negative argument")
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Translated solid harmonic against the finite `(l', m')` double sum.
fn addition_theorem(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let lm = random_index(rng, 4);
        let (li, mi) = (lm.l(), lm.m());
        let (r, big_r) = (point(rng, 2.0), point(rng, 2.0));
        let minus_r = [-big_r[0], -big_r[1], -big_r[2]];
        let lhs = solid_harmonic_real(lm, sub(r, big_r));
        let mut rhs = Complex64::new(0.0, 0.0);
        for lp in 0..=li {
            let m_lo = (-(lp as i32)).max(mi - li as i32 + lp as i32);
            let m_hi = (lp as i32).min(mi + li as i32 - lp as i32);
            for mp in m_lo..=m_hi {
                let g = odd_df(2 * li + 1) / (odd_df(2 * lp + 1) * odd_df(2 * (li - lp) + 1))
                    * gaunt_coefficient(li, mi, lp, mp, li - lp, mi - mp);
                rhs += 4.0
                    * PI
                    * g
                    * solid_harmonic_real(AngularIndex::new(lp, mp)?, r)
                    * solid_harmonic_real(AngularIndex::new(li - lp, mi - mp)?, minus_r);
            }
        }
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }
    Ok((100, worst))
}

/// Translated general harmonic polynomial, `n ≤ 2`.
fn general_addition_theorem(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let lm = random_index(rng, 4);
        let n = rng.random_range(0..=2);
        let (r, big_r) = (point(rng, 2.0), point(rng, 2.0));
        let minus_r = [-big_r[0], -big_r[1], -big_r[2]];
        let lhs = harmonic_polynomial_real(n, lm, sub(r, big_r));
        let rhs: Complex64 = harmonic_polynomial_translation(n, lm)
            .iter()
            .map(|t| t.weight * harmonic_polynomial_real(t.n1, t.lm1, r) * harmonic_polynomial_real(t.n2, t.lm2, minus_r))
            .sum();
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }
    Ok((100, worst))
}

/// `e^{2β r·R}` against its `(λ, k)` double sum truncated at 30.
fn expansion_formula(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    const TRUNC: u32 = 30;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let beta = rng.random_range(0.05..1.0);
        let (mut r, mut big_r) = (point(rng, 3.0), point(rng, 2.0));
        let norm = |v: Vec3| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let x = beta * norm(r) * norm(big_r);
        if x > 5.0 {
            let s = (5.0 / x).sqrt();
            r = r.map(|c| c * s);
            big_r = big_r.map(|c| c * s);
        }
        let two_beta_r = big_r.map(|c| 2.0 * beta * c);
        let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        let q2 = two_beta_r.iter().map(|c| c * c).sum::<f64>();
        let lhs = (2.0 * beta * (r[0] * big_r[0] + r[1] * big_r[1] + r[2] * big_r[2])).exp();
        let mut rhs = Complex64::new(0.0, 0.0);
        for lambda in 0..=TRUNC {
            let mut angular = Complex64::new(0.0, 0.0);
            for mu in -(lambda as i32)..=lambda as i32 {
                let sign = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                angular += sign
                    * solid_harmonic_real(AngularIndex::new(lambda, mu)?, r)
                    * solid_harmonic_real(AngularIndex::new(lambda, -mu)?, two_beta_r);
            }
            let radial: f64 = (0..=TRUNC)
                .map(|k| (r2 * q2).powi(k as i32) / (odd_df(2 * k) * odd_df(2 * k + 2 * lambda + 1)))
                .sum();
            rhs += 4.0 * PI * angular * radial;
        }
        worst = worst.max((lhs - rhs).norm() / lhs.max(1.0));
    }
    Ok((100, worst))
}

/// Pointwise Gaussian product theorem with a complex exponent.
fn product_theorem(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let alpha = Complex64::new(rng.random_range(0.05..5.0), rng.random_range(-5.0..5.0));
        let beta = rng.random_range(0.05..2.0);
        let big_r = point(rng, 2.0);
        let prod = gaussian_product(alpha, beta, big_r)?;
        let c = prod.center.components();
        for _ in 0..100 {
            let r = point(rng, 3.0);
            let r2 = r.iter().map(|v| v * v).sum::<f64>();
            let d = sub(r, big_r);
            let d2 = d.iter().map(|v| v * v).sum::<f64>();
            let lhs = (-alpha * r2 - beta * d2).exp();
            let shifted: Complex64 = (0..3).map(|i| (r[i] - c[i]) * (r[i] - c[i])).sum();
            let rhs = prod.prefactor * (-prod.gamma * shifted).exp();
            worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
        }
    }
    Ok((1000, worst))
}

/// `∫ e^{-γ(x-ib)²}(x-ib)ⁿ dx` by quadrature on the real line against the
/// unshifted moment. On the real line the integrand can exceed the moment by
/// many orders of magnitude and f64 quadrature cannot resolve the
/// cancellation, so draws with `∫|f| > 10⁴ |moment|` are redrawn.
fn contour_shift(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for _ in 0..100_000 {
        if samples == 100 {
            break;
        }
        let n = rng.random_range(0..=8u32);
        let gamma = Complex64::new(rng.random_range(0.1..5.0), rng.random_range(-5.0..5.0));
        let b = rng.random_range(-3.0..=3.0);
        let shift = Complex64::new(0.0, b);
        let peak_at = -b * gamma.im / gamma.re;
        let half = (80.0 / gamma.re).sqrt() + 10.0;
        let breaks: Vec<f64> = (0..=16).map(|i| peak_at - half + 2.0 * half * i as f64 / 16.0).collect();
        let f = |x: f64| {
            let w = x - shift;
            (-gamma * w * w).exp() * w.powu(n)
        };
        let l1 = integrate_simple(|x| f(x).norm().into(), &breaks, 0.0, 1e-6, 500).value.re;
        // Odd moments vanish; measure them against the next even one.
        let exact = gaussian_moment(n, gamma)?;
        let scale = if n % 2 == 0 { exact.norm() } else { gaussian_moment(n + 1, gamma)?.norm().sqrt() };
        if !l1.is_finite() || l1 > 1e4 * scale {
            continue;
        }
        samples += 1;
        let q = integrate_simple(f, &breaks, 1e-14 * l1, 1e-13, 4000);
        worst = worst.max((q.value - exact).norm() / scale);
    }
    Ok((samples, worst))
}

/// The radial k-series before resummation against its `₁F₁` closed form.
fn kummer_series(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    while samples < 100 {
        let (l, lp, lambda) = (rng.random_range(0..=5u32), rng.random_range(0..=5u32), rng.random_range(0..=6u32));
        let alpha = Complex64::new(rng.random_range(0.05..3.0), rng.random_range(-3.0..3.0));
        let beta = rng.random_range(0.05..1.0);
        let big_r = rng.random_range(0.0..3.0);
        let gamma = alpha + beta;
        let z = beta * beta * big_r * big_r / gamma;
        // Off the real axis the f64 series loses about e^{|z| - Re z}.
        if z.norm() - z.re > 3.0 {
            continue;
        }
        samples += 1;
        let h = l + lp + lambda + 4;
        let p = h as f64 / 2.0;
        let b = lambda as f64 + 1.5;
        // term_k = [4β²R²]^k √π Γ(k+p) / (2^{2k+λ+1} Γ(k+1) Γ(k+λ+3/2) 2 γ^{k+p}),
        // generated from term_0 by its exact ratio.
        let t0 = (0.5 * PI.ln() + ln_gamma(p) - (lambda as f64 + 2.0) * 2f64.ln() - ln_gamma(b)).exp();
        let gdd = Cdd::from(gamma);
        let zdd = Cdd::from(Dd::new(beta * beta * big_r * big_r)) / gdd;
        let mut term = gdd.pow_neg_half(h) * t0;
        let mut series = term;
        for k in 0..2000 {
            let kf = k as f64;
            term = (term * zdd).scale(Dd::new(p + kf) / (Dd::new(kf + 1.0) * (b + kf)));
            series = series + term;
            if kf > z.norm() && term.norm_f64() < 1e-34 * series.norm_f64() {
                break;
            }
        }
        let closed = t0 * (-p * gamma.ln()).exp() * kummer_1f1(p, b, z)?;
        worst = worst.max((series.to_c64() - closed).norm() / closed.norm());
    }
    Ok((samples, worst))
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Gaunt coefficients against Gauss-Legendre × trapezoid angular quadrature,
/// exact for the polynomial integrands at `l ≤ 6`.
fn gaunt_quadrature(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let nodes = gauss_legendre(16);
    const NPHI: usize = 32;
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    while samples < 100 {
        let a = random_index(rng, 6);
        let c = random_index(rng, 6);
        let l2 = rng.random_range(0..=6u32);
        let m2 = a.m() + c.m();
        if m2.unsigned_abs() > l2 {
            continue;
        }
        let b = AngularIndex::new(l2, m2)?;
        samples += 1;
        let mut quad = Complex64::new(0.0, 0.0);
        for &(x, w) in &nodes {
            let theta = x.acos();
            for j in 0..NPHI {
                let phi = 2.0 * PI * j as f64 / NPHI as f64;
                quad += w * (2.0 * PI / NPHI as f64)
                    * spherical_harmonic(b, theta, phi).conj()
                    * spherical_harmonic(a, theta, phi)
                    * spherical_harmonic(c, theta, phi);
            }
        }
        let g = gaunt_coefficient(l2, m2, a.l(), a.m(), c.l(), c.m());
        worst = worst.max((quad - g).norm());
    }
    Ok((samples, worst))
}

/// `F_l(0, ρ) = ρ j_l(ρ)` on `ρ ∈ [0.1, 50]`, `l ≤ 8`.
fn coulomb_free(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l = rng.random_range(0..=8u32);
        let rho = rng.random_range(0.1..50.0);
        let f = coulomb_wave(l, 0.0, rho)?;
        let want = rho * spherical_bessel_j(l, rho);
        worst = worst.max((f - want).abs() / want.abs().max(1e-300));
    }
    Ok((100, worst))
}

/// Monomial expansion of `r^l Y_l^{m*}` against the conjugated solid harmonic.
fn cartesian_expansion(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let lm = random_index(rng, 6);
        let r = point(rng, 2.0);
        let sum: Complex64 = cartesian_harmonic_coeffs(lm)
            .iter()
            .map(|m| m.weight * r[0].powi(m.powers[0] as i32) * r[1].powi(m.powers[1] as i32) * r[2].powi(m.powers[2] as i32))
            .sum();
        let want = solid_harmonic_real(lm, r).conj();
        worst = worst.max((sum - want).norm() / want.norm().max(1.0));
    }
    Ok((100, worst))
}
