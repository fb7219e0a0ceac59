//! Closed-form length-gauge transition integrals for cartesian Gaussian
//! initial states via the Gaussian product theorem with complex centers.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dd::{Cdd, Dd};
use crate::continuum::{config_digest, ContinuumSpec, TransitionResult};
use crate::error::{Error, Result};
use crate::fit::ComplexGaussianBasis;
use crate::special::harmonics::ipow;
use crate::special::{binomial, factorial};
use crate::state::CartesianGaussianState;
use crate::sum::CompensatedSum;
use crate::types::{AngularIndex, Complex3Vector, Vec3};

/// `e^{-α r²} e^{-β(r-R)²} = prefactor · e^{-γ(r-C)²}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianProduct {
    pub gamma: Complex64,
    pub center: Complex3Vector,
    pub prefactor: Complex64,
}

pub fn gaussian_product(alpha: Complex64, beta: f64, r: Vec3) -> Result<GaussianProduct> {
    if !(alpha.re > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("complex exponent {alpha} needs a positive real part")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("beta = {beta} must be positive")));
    }
    let gamma = alpha + beta;
    let ratio = beta / gamma;
    let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    Ok(GaussianProduct {
        gamma,
        center: Complex3Vector::from_real(r) * ratio,
        prefactor: (-alpha * ratio * r2).exp(),
    })
}

/// One monomial `weight · x^px y^py z^pz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub powers: [u32; 3],
    pub weight: Complex64,
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn c1(l: u32, am: u32, k: u32) -> f64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign / 2f64.powi(l as i32) * binomial(l, k) * binomial(2 * l - 2 * k, l) * factorial(l - 2 * k)
        / factorial(l - 2 * k - am)
}

fn c2(m: i32, p: u32) -> Complex64 {
    let am = m.unsigned_abs() as i64;
    if m >= 0 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * i_pow(am - p as i64)
    } else {
        i_pow(-(am - p as i64))
    }
}

/// `r^l Y_l^{m*}(r̂)` as a sum of monomials of total degree `l`, identical
/// monomials merged, ordered by powers.
pub fn cartesian_harmonic_coeffs(lm: AngularIndex) -> Vec<Monomial> {
    let (norm, raw) = unnormalized_monomials(lm);
    raw.into_iter()
        .map(|m| Monomial { powers: m.powers, weight: m.weight * norm })
        .collect()
}

/// Expansion with the normalization split off; the remaining weights are
/// dyadic rationals times powers of `i`, hence exact in f64 for moderate `l`.
fn unnormalized_monomials(lm: AngularIndex) -> (f64, Vec<Monomial>) {
    let (l, m) = (lm.l(), lm.m());
    let am = m.unsigned_abs();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
    let mut merged: BTreeMap<[u32; 3], Complex64> = BTreeMap::new();
    for k in 0..=(l - am) / 2 {
        let ck = c1(l, am, k);
        for h in 0..=k {
            for j in 0..=(k - h) {
                let chj = ck * binomial(k, h) * binomial(k - h, j);
                for p in 0..=am {
                    let w = chj * binomial(am, p) * c2(m, p).conj();
                    let powers = [2 * (k - h - j) + p, 2 * j + am - p, 2 * h + l - 2 * k - am];
                    *merged.entry(powers).or_default() += w;
                }
            }
        }
    }
    let monomials = merged
        .into_iter()
        .filter(|(_, w)| *w != Complex64::new(0.0, 0.0))
        .map(|(powers, weight)| Monomial { powers, weight })
        .collect();
    (norm, monomials)
}

/// `∫ e^{-γ x²} xⁿ dx` on the principal branch.
pub fn gaussian_moment(n: u32, gamma: Complex64) -> Result<Complex64> {
    if !(gamma.re > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("Gaussian moment needs Re(γ) > 0, got {gamma}")));
    }
    if n % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = PI.sqrt() * factorial(n) / (2f64.powi(n as i32) * factorial(n / 2));
    Ok(c * (-(n as f64 + 1.0) / 2.0 * gamma.ln()).exp())
}

/// `∫ e^{-γ(x-c)²} x^a (x-X)^b dx` by binomial expansion about the complex
/// center `c`; the imaginary part of `c` only enters the polynomial factors.
pub fn axis_integral(a: u32, b: u32, shift: f64, c: Complex64, gamma: Complex64) -> Result<Complex64> {
    let moments = (0..=a + b).map(|n| gaussian_moment(n, gamma)).collect::<Result<Vec<_>>>()?;
    Ok(axis_with_moments(a, b, shift, c, &moments))
}

fn axis_with_moments(a: u32, b: u32, shift: f64, c: Complex64, moments: &[Complex64]) -> Complex64 {
    let cx = c - shift;
    let mut acc = CompensatedSum::new();
    for i1 in 0..=a {
        let f1 = binomial(a, i1) * ipow(c, a - i1);
        for i2 in 0..=b {
            let n = (i1 + i2) as usize;
            if n % 2 == 1 {
                continue;
            }
            acc += f1 * binomial(b, i2) * ipow(cx, b - i2) * moments[n];
        }
    }
    acc.value()
}

/// `ℐ_{l,m} = ∫ (u*/r) Y_l^{m*} z Φ(r - R) d³r`.
pub fn i_lm(
    lm: AngularIndex,
    state: &CartesianGaussianState,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<Complex64> {
    let (norm, monomials) = unnormalized_monomials(lm);
    let alphas = basis.exponents(lm.l())?;
    let coeffs = basis.coefficients(lm.l(), k_index)?;
    let [nx, ny, nz] = state.powers();
    let r = state.center();
    let max_power = (lm.l() + 1 + nx.max(ny).max(nz)) as usize;
    let beta = Dd::new(state.beta());
    let r2 = Dd::new(r[0]) * Dd::new(r[0]) + Dd::new(r[1]) * Dd::new(r[1]) + Dd::new(r[2]) * Dd::new(r[2]);
    // Terms are summed over s in double-double: the total can be many orders
    // of magnitude below the individual terms.
    let mut acc = Cdd::default();
    for (alpha, c) in alphas.iter().zip(coeffs) {
        gaussian_product(*alpha, state.beta(), r)?;
        let gamma = Cdd::from(*alpha) + Cdd::from(beta);
        let inv = gamma.recip();
        let prefactor = (-(Cdd::from(*alpha) * inv).scale(beta * r2)).exp();
        // (n-1)!! / (2γ)^{n/2} for even n; the common √π γ^{-1/2} per axis is
        // applied once below.
        let half_inv = inv * 0.5;
        let mut moments = vec![Cdd::default(); max_power + 2];
        let mut even = Cdd::ONE;
        for n in (0..moments.len()).step_by(2) {
            if n > 0 {
                even = (even * half_inv) * (n as f64 - 1.0);
            }
            moments[n] = even;
        }
        let center = [0, 1, 2].map(|i| inv.scale(beta * r[i]));
        let mut inner = Cdd::default();
        for mono in &monomials {
            let [px, py, pz] = mono.powers;
            let ix = axis_dd(px, nx, r[0], center[0], &moments);
            let iy = axis_dd(py, ny, r[1], center[1], &moments);
            let iz = axis_dd(pz + 1, nz, r[2], center[2], &moments);
            inner = inner + Cdd::from(mono.weight) * ix * iy * iz;
        }
        acc = acc + Cdd::from(*c) * prefactor * gamma.pow_neg_half(3) * inner;
    }
    Ok(acc.to_c64() * (norm * PI.powf(1.5)))
}

fn axis_dd(a: u32, b: u32, shift: f64, c: Cdd, moments: &[Cdd]) -> Cdd {
    let cx = c - Cdd::from(Dd::new(shift));
    let mut acc = Cdd::default();
    for i1 in 0..=a {
        let f1 = c.powu(a - i1) * binomial(a, i1);
        for i2 in 0..=b {
            let n = (i1 + i2) as usize;
            if n % 2 == 1 {
                continue;
            }
            acc = acc + f1 * cx.powu(b - i2) * moments[n] * binomial(b, i2);
        }
    }
    acc
}

/// Length-gauge amplitude `𝒯 = (1/k)√(2/π) Σ_{l,m} (-i)^l e^{iσ_l} Y_l^m(k̂) ℐ_{l,m}`.
pub fn amplitude_cartesian(
    state: &CartesianGaussianState,
    continuum: &ContinuumSpec,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<TransitionResult> {
    continuum.check_basis(basis, k_index)?;
    let pre = (2.0 / PI).sqrt() / continuum.k_e();
    let partials = AngularIndex::up_to(continuum.l_max())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|lm| Ok((lm, pre * continuum.wave_factor(lm) * i_lm(lm, state, basis, k_index)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransitionResult::from_partials(partials, config_digest(state, continuum, basis)))
}
