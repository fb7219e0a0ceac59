//! Closed-form length-gauge transition integrals for spherical Gaussian
//! initial states.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dd::{kummer_1f1_dd, Cdd, Dd};
use crate::continuum::{config_digest, ContinuumSpec, TransitionResult};
use crate::error::{Error, Result};
use crate::fit::ComplexGaussianBasis;
use crate::special::{double_factorial, gaunt_coefficient, harmonic_polynomial_real, ln_gamma, solid_harmonic_real};
use crate::state::SphericalGaussianState;
use crate::sum::CompensatedSum;
use crate::types::{AngularIndex, Vec3};

/// One term of `𝕐^n_{lm}(r - R) = Σ w 𝕐^{n1}_{l1 m1}(r) 𝕐^{n2}_{l2 m2}(-R)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationTerm {
    pub n1: u32,
    pub lm1: AngularIndex,
    pub n2: u32,
    pub lm2: AngularIndex,
    pub weight: f64,
}

fn odd_df(n: u32) -> f64 {
    double_factorial(n as i64).expect("non-negative argument")
}

/// Expansion of a translated general harmonic polynomial into products of
/// harmonic polynomials of `r` and of `-R`.
pub fn harmonic_polynomial_translation(n: u32, lm: AngularIndex) -> Vec<TranslationTerm> {
    let (li, mi) = (lm.l(), lm.m());
    let top = li + 2 * n;
    let mut out = Vec::new();
    for l1 in 0..=top {
        let l2_max = (l1 + li).min(top - l1);
        for l2 in li.abs_diff(l1)..=l2_max {
            if (l1 + l2 + li) % 2 == 1 {
                continue;
            }
            let delta = (l1 + l2 - li) / 2;
            if delta > n {
                continue;
            }
            for n1 in 0..=(n - delta) {
                let n2 = n - n1 - delta;
                let m_lo = (-(l1 as i32)).max(mi - l2 as i32);
                let m_hi = (l1 as i32).min(mi + l2 as i32);
                for m1 in m_lo..=m_hi {
                    let m2 = mi - m1;
                    let g = gaunt_coefficient(li, mi, l1, m1, l2, m2);
                    if g == 0.0 {
                        continue;
                    }
                    let k = odd_df(2 * n) / (odd_df(2 * n1) * odd_df(2 * n2)) * odd_df(2 * (n + li) + 1)
                        / (odd_df(2 * (n1 + l1) + 1) * odd_df(2 * (n2 + l2) + 1))
                        * g;
                    out.push(TranslationTerm {
                        n1,
                        lm1: AngularIndex::new(l1, m1).expect("m1 within l1"),
                        n2,
                        lm2: AngularIndex::new(l2, m2).expect("gaunt selection"),
                        weight: 4.0 * PI * k,
                    });
                }
            }
        }
    }
    out
}

/// Expansion of a translated solid harmonic; the `n = 0` case of
/// [`harmonic_polynomial_translation`].
pub fn solid_harmonic_translation(lm: AngularIndex) -> Vec<TranslationTerm> {
    harmonic_polynomial_translation(0, lm)
}

/// `Σ_s c_s (α_s+β)^{-p} ₁F₁(p, λ+3/2; β²R²/(α_s+β))` with `p = (l+l'+λ+4)/2`.
pub fn g_element(
    l: u32,
    lp: u32,
    lambda: u32,
    basis: &ComplexGaussianBasis,
    k_index: usize,
    beta: f64,
    r2: f64,
) -> Result<Complex64> {
    let alphas = basis.exponents(l)?;
    let coeffs = basis.coefficients(l, k_index)?;
    let h = l + lp + lambda + 4;
    let p = h as f64 / 2.0;
    let b = lambda as f64 + 1.5;
    // The sum over s cancels heavily for small β and large k, so each term
    // and the sum are carried in double-double.
    let b2r2 = Dd::new(beta) * Dd::new(beta) * r2;
    let mut acc = Cdd::default();
    for (a, c) in alphas.iter().zip(coeffs) {
        let g = Cdd::from(*a) + Cdd::from(Dd::new(beta));
        let z = Cdd::from(b2r2) / g;
        if z.norm_f64() > 500.0 {
            return Err(Error::Domain(format!("1F1 argument |z| = {} beyond limit 500", z.norm_f64())));
        }
        acc = acc + Cdd::from(*c) * g.pow_neg_half(h) * kummer_1f1_dd(p, b, z)?;
    }
    Ok(acc.to_c64())
}

/// Shared radial/angular core for one term `r^{2 n1} 𝒴_{l1}^{m1}(r)` of the
/// translated initial state:
///
/// `Σ_d <l1 m1|1 0|d m1> Σ_λ <l m|λ, m-m1|d m1> Γ(p)/Γ(λ+3/2) 𝒢_{l, l1+2n1, λ} 𝒴_λ^{m1-m}(βR)`.
struct Core<'a> {
    basis: &'a ComplexGaussianBasis,
    k_index: usize,
    beta: f64,
    r2: f64,
    beta_r: Vec3,
    lm: AngularIndex,
    g_cache: HashMap<(u32, u32), Complex64>,
}

impl<'a> Core<'a> {
    fn new(lm: AngularIndex, state: &SphericalGaussianState, basis: &'a ComplexGaussianBasis, k_index: usize) -> Self {
        let r = state.center();
        let beta = state.beta();
        Self {
            basis,
            k_index,
            beta,
            r2: r[0] * r[0] + r[1] * r[1] + r[2] * r[2],
            beta_r: [beta * r[0], beta * r[1], beta * r[2]],
            lm,
            g_cache: HashMap::new(),
        }
    }

    fn g(&mut self, lp: u32, lambda: u32) -> Result<Complex64> {
        if let Some(v) = self.g_cache.get(&(lp, lambda)) {
            return Ok(*v);
        }
        let v = g_element(self.lm.l(), lp, lambda, self.basis, self.k_index, self.beta, self.r2)?;
        self.g_cache.insert((lp, lambda), v);
        Ok(v)
    }

    fn eval(&mut self, n1: u32, l1: u32, m1: i32) -> Result<Complex64> {
        let (l, m) = (self.lm.l(), self.lm.m());
        let lp = l1 + 2 * n1;
        let mut acc = CompensatedSum::new();
        for d in l1.saturating_sub(1)..=l1 + 1 {
            let gd = gaunt_coefficient(l1, m1, 1, 0, d, m1);
            if gd == 0.0 {
                continue;
            }
            for lambda in l.abs_diff(d)..=l + d {
                let gl = gaunt_coefficient(l, m, lambda, m - m1, d, m1);
                if gl == 0.0 {
                    continue;
                }
                let y = solid_harmonic_real(AngularIndex::new(lambda, m1 - m)?, self.beta_r);
                if y == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = (ln_gamma((l + lp + lambda + 4) as f64 / 2.0) - ln_gamma(lambda as f64 + 1.5)).exp();
                acc += gd * gl * ratio * self.g(lp, lambda)? * y;
            }
        }
        Ok(acc.value())
    }
}

fn sign(m: i32) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn neg(v: Vec3) -> Vec3 {
    [-v[0], -v[1], -v[2]]
}

/// `J_{l,m}` for an initial state with `n = 0`, through the solid-harmonic
/// addition theorem.
pub fn j_lm_n0(
    lm: AngularIndex,
    state: &SphericalGaussianState,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<Complex64> {
    if state.n() != 0 {
        return Err(Error::Config(format!("j_lm_n0 needs n = 0, got {}", state.n())));
    }
    let (li, mi) = (state.lm().l(), state.lm().m());
    let mut core = Core::new(lm, state, basis, k_index);
    let minus_r = neg(state.center());
    let mut acc = CompensatedSum::new();
    for lp in 0..=li {
        let f = 1.0 / (odd_df(2 * lp + 1) * odd_df(2 * (li - lp) + 1));
        let m_lo = (-(lp as i32)).max(mi - li as i32 + lp as i32);
        let m_hi = (lp as i32).min(mi + li as i32 - lp as i32);
        for mp in m_lo..=m_hi {
            let g = gaunt_coefficient(li, mi, lp, mp, li - lp, mi - mp);
            if g == 0.0 {
                continue;
            }
            let y = solid_harmonic_real(AngularIndex::new(li - lp, mi - mp)?, minus_r);
            if y == Complex64::new(0.0, 0.0) {
                continue;
            }
            acc += f * sign(mp) * g * y * core.eval(0, lp, mp)?;
        }
    }
    Ok(acc.value() * prefactor(lm, state) * odd_df(2 * li + 1))
}

/// `4π²√π (-1)^m e^{-βR²}`.
fn prefactor(lm: AngularIndex, state: &SphericalGaussianState) -> f64 {
    let r = state.center();
    let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    4.0 * PI * PI * PI.sqrt() * sign(lm.m()) * (-state.beta() * r2).exp()
}

/// `J_{l,m}` for any `n >= 0`, through the harmonic-polynomial addition theorem.
pub fn j_lm_general(
    lm: AngularIndex,
    state: &SphericalGaussianState,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<Complex64> {
    let mut core = Core::new(lm, state, basis, k_index);
    let minus_r = neg(state.center());
    let mut acc = CompensatedSum::new();
    for t in harmonic_polynomial_translation(state.n(), state.lm()) {
        let y = harmonic_polynomial_real(t.n2, t.lm2, minus_r);
        if y == Complex64::new(0.0, 0.0) {
            continue;
        }
        let m1 = t.lm1.m();
        acc += t.weight / (4.0 * PI) * sign(m1) * y * core.eval(t.n1, t.lm1.l(), m1)?;
    }
    Ok(acc.value() * prefactor(lm, state))
}

/// `J_{l,m}` of a state centered at the origin: one Gaunt factor times a
/// radial Γ-integral.
pub fn j_lm_monocentric(
    lm: AngularIndex,
    state: &SphericalGaussianState,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<Complex64> {
    let (li, mi) = (state.lm().l(), state.lm().m());
    let g = gaunt_coefficient(lm.l(), lm.m(), 1, 0, li, mi);
    if g == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let h = lm.l() + li + 2 * state.n() + 4;
    let gamma_p = ln_gamma(h as f64 / 2.0).exp();
    let beta = Cdd::from(Dd::new(state.beta()));
    let mut acc = Cdd::default();
    for (a, c) in basis.exponents(lm.l())?.iter().zip(basis.coefficients(lm.l(), k_index)?) {
        acc = acc + Cdd::from(*c) * (Cdd::from(*a) + beta).pow_neg_half(h);
    }
    Ok(acc.to_c64() * g * gamma_p / 2.0)
}

fn assemble(
    state: &SphericalGaussianState,
    continuum: &ContinuumSpec,
    basis: &ComplexGaussianBasis,
    k_index: usize,
    element: fn(AngularIndex, &SphericalGaussianState, &ComplexGaussianBasis, usize) -> Result<Complex64>,
) -> Result<TransitionResult> {
    continuum.check_basis(basis, k_index)?;
    let pre = 2.0 * 2f64.sqrt() / (continuum.k_e() * 3f64.sqrt());
    let partials = AngularIndex::up_to(continuum.l_max())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|lm| Ok((lm, pre * continuum.wave_factor(lm) * element(lm, state, basis, k_index)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransitionResult::from_partials(partials, config_digest(state, continuum, basis)))
}

/// Length-gauge amplitude `𝒯 = 2√2/(k√3) Σ_{l,m} (-i)^l e^{iσ_l} Y_l^m(k̂) J_{l,m}`.
pub fn amplitude_spherical(
    state: &SphericalGaussianState,
    continuum: &ContinuumSpec,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<TransitionResult> {
    assemble(state, continuum, basis, k_index, j_lm_general)
}

/// Amplitude from [`j_lm_monocentric`]; the state must sit at the origin.
pub fn amplitude_monocentric(
    state: &SphericalGaussianState,
    continuum: &ContinuumSpec,
    basis: &ComplexGaussianBasis,
    k_index: usize,
) -> Result<TransitionResult> {
    if state.center() != [0.0; 3] {
        return Err(Error::Config("monocentric amplitude needs the state at the origin".into()));
    }
    assemble(state, continuum, basis, k_index, j_lm_monocentric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::kummer_1f1;

    fn single_gaussian() -> ComplexGaussianBasis {
        let e = vec![Complex64::new(1.0, 0.0)];
        ComplexGaussianBasis::from_parts(
            25.0,
            1.0,
            vec![1.0],
            vec![e.clone(), e.clone(), e],
            vec![vec![vec![Complex64::new(1.0, 0.0)]]; 3],
        )
        .unwrap()
    }

    #[test]
    fn g_element_by_substitution() {
        let b = single_gaussian();
        let v = g_element(0, 0, 0, &b, 0, 1.0, 1.0).unwrap();
        let want = 0.25 * kummer_1f1(2.0, 1.5, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - want).norm() < 1e-15);
        let v0 = g_element(1, 0, 1, &b, 0, 0.5, 0.0).unwrap();
        assert!((v0 - Complex64::new(1.5f64.powf(-3.0), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn origin_keeps_only_dipole_partner() {
        let b = single_gaussian();
        let s = SphericalGaussianState::s_type(0.3, [0.0; 3]).unwrap();
        for lm in AngularIndex::up_to(2) {
            let j = j_lm_n0(lm, &s, &b, 0).unwrap();
            if lm.l() == 1 && lm.m() == 0 {
                let mono = j_lm_monocentric(lm, &s, &b, 0).unwrap();
                assert!((j - mono).norm() < 1e-14 * mono.norm());
            } else {
                assert_eq!(j, Complex64::new(0.0, 0.0), "{lm}");
            }
        }
    }

    #[test]
    fn translation_reduces_to_solid_harmonic_case() {
        let lm = AngularIndex::new(2, 1).unwrap();
        for t in solid_harmonic_translation(lm) {
            assert_eq!((t.n1, t.n2), (0, 0));
            assert_eq!(t.lm1.l() + t.lm2.l(), 2);
        }
    }
}
