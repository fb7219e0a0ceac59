//! Reference transition integrals by nested adaptive quadrature.
//!
//! [`amplitude_numeric`] uses exact Coulomb radial functions; the partial
//! wave sum is carried to `reference_l_max`, independently of the truncation
//! used by the closed forms. [`partial_integral_numeric`] integrates the
//! fitted radial representation instead, so it checks the closed forms
//! term by term.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::continuum::ContinuumSpec;
use crate::error::{Error, Result};
use crate::fit::ComplexGaussianBasis;
use crate::quadrature::{integrate, Quadrature};
use crate::special::{binomial, legendre_polynomials, spherical_harmonic, RegularCoulomb};
use crate::state::InitialState;
use crate::types::{AngularIndex, Vec3};

/// Tolerances and truncation of the reference integrals.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisections allowed per adaptive integration.
    pub max_subdivisions: usize,
    /// Radial cutoff in bohr.
    pub r_cut: f64,
    /// Highest partial wave of the exact continuum in [`amplitude_numeric`].
    pub reference_l_max: u32,
    /// Integrate `φ` analytically when the configuration allows it.
    pub reduce_symmetric: bool,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
            r_cut: 60.0,
            reference_l_max: 30,
            reduce_symmetric: true,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if !(self.r_cut > 0.0 && self.r_cut.is_finite()) {
            return Err(Error::Config(format!("r_cut = {} must be positive", self.r_cut)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    /// Copy with `rel_tol` halved.
    pub fn halved(&self) -> Self {
        Self {
            rel_tol: 0.5 * self.rel_tol,
            ..self.clone()
        }
    }
}

/// A reference integral with its error estimate and the bound on the
/// discarded radial tail `r > r_cut`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericResult {
    pub value: Complex64,
    pub error: f64,
    pub tail_bound: f64,
    pub evaluations: usize,
    /// True when the `φ` integral was done analytically.
    pub reduced: bool,
}

/// Radial breakpoints at multiples of `π/k` up to `r_cut`.
fn radial_breaks(k: f64, r_cut: f64) -> Vec<f64> {
    let step = PI / k;
    let mut b = vec![0.0];
    let mut r = step;
    while r < r_cut - 1e-9 * step {
        b.push(r);
        r += step;
    }
    b.push(r_cut);
    b
}

fn point(r: f64, theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [r * st * cp, r * st * sp, r * ct]
}

/// Integrates `f(r, θ, φ) r² sin θ` over the ball of radius `r_cut`; with
/// `reduced` the integrand is taken at `φ = 0` and multiplied by `2π`.
fn integrate_ball<F>(f: F, k: f64, settings: &QuadratureSettings, reduced: bool) -> Quadrature
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    // The radial integrand oscillates and cancels, so inner errors must sit
    // well below the outer tolerance to keep the outer refinement effective.
    let inner_abs = 1e-3 * settings.abs_tol / settings.r_cut;
    let inner_rel = 1e-3 * settings.rel_tol;
    let theta_breaks = [0.0, 0.25 * PI, 0.5 * PI, 0.75 * PI, PI];
    let phi_breaks = [0.0, 0.5 * PI, PI, 1.5 * PI, 2.0 * PI];
    let max_sub = settings.max_subdivisions;
    let mut evaluations = 0;
    let outer = integrate(
        |r| {
            let theta_q = integrate(
                |theta| {
                    let weight = r * r * theta.sin();
                    if reduced {
                        (2.0 * PI * weight * f(r, theta, 0.0), 0.0)
                    } else {
                        let q = integrate(
                            |phi| (f(r, theta, phi), 0.0),
                            &phi_breaks,
                            inner_abs / (PI * r * r).max(1e-300),
                            inner_rel,
                            max_sub,
                        );
                        evaluations += q.evaluations;
                        (weight * q.value, weight * q.error)
                    }
                },
                &theta_breaks,
                inner_abs,
                inner_rel,
                max_sub,
            );
            evaluations += theta_q.evaluations;
            (theta_q.value, theta_q.error)
        },
        &radial_breaks(k, settings.r_cut),
        settings.abs_tol,
        settings.rel_tol,
        max_sub,
    );
    Quadrature { evaluations, ..outer }
}

fn finish(q: Quadrature, tail_bound: f64, reduced: bool, settings: &QuadratureSettings) -> Result<NumericResult> {
    let tolerance = settings.abs_tol.max(settings.rel_tol * q.value.norm());
    if !q.converged || !q.error.is_finite() {
        return Err(Error::Quadrature {
            value: q.value,
            estimate: q.error,
            tolerance,
        });
    }
    Ok(NumericResult {
        value: q.value,
        error: q.error,
        tail_bound,
        evaluations: q.evaluations,
        reduced,
    })
}

/// `∫_{r_c}^∞ (t + 2|R|)^n e^{-β t²} dt` with `t = r - |R|`, bounded term by
/// term through `∫_{t0}^∞ t^j e^{-βt²} dt ≤ t0^j e^{-βt0²} / (2βt0 - j/t0)`.
fn gaussian_tail(n: u32, beta: f64, r_len: f64, r_cut: f64) -> f64 {
    let t0 = r_cut - r_len;
    if t0 <= 0.0 {
        return f64::INFINITY;
    }
    let mut total = 0.0;
    for j in 0..=n {
        let rate = 2.0 * beta * t0 - j as f64 / t0;
        if rate <= 0.0 {
            return f64::INFINITY;
        }
        let term = (j as f64 * t0.ln() - beta * t0 * t0).exp() / rate;
        total += binomial(n, j) * (2.0 * r_len).powi((n - j) as i32) * term;
    }
    total
}

/// Bound on `|Φ(r - R)| / ((|r| + |R|)^deg e^{-β(|r| - |R|)²})`.
fn state_constant(state: &InitialState) -> f64 {
    match state {
        InitialState::Spherical(s) => ((2 * s.lm().l() + 1) as f64 / (4.0 * PI)).sqrt(),
        InitialState::Cartesian(_) => 1.0,
    }
}

fn r_len(state: &InitialState) -> f64 {
    let c = state.center();
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

fn unit_z(direction: Vec3) -> bool {
    direction == [0.0, 0.0, 1.0]
}

/// Length-gauge amplitude `<ψ_k | z | Φ>` with the exact Coulomb continuum.
///
/// The tail bound assumes `|F_l(η, ρ)| ≤ 2` beyond `k r_cut`.
pub fn amplitude_numeric(
    state: &InitialState,
    continuum: &ContinuumSpec,
    settings: &QuadratureSettings,
) -> Result<NumericResult> {
    settings.validate()?;
    let k = continuum.k_e();
    let eta = continuum.eta();
    let l_ref = settings.reference_l_max;
    let tail = {
        let psi = (2.0 / PI).sqrt() / k * ((l_ref + 1) as f64).powi(2) / (4.0 * PI) * 2.0;
        4.0 * PI * psi * state_constant(state) * gaussian_tail(state.degree() + 2, state.beta(), r_len(state), settings.r_cut)
    };

    let order = state.azimuthal_order().filter(|_| unit_z(continuum.direction()));
    let reduced = settings.reduce_symmetric && order.is_some();
    if reduced && order != Some(0) {
        return Ok(NumericResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            tail_bound: tail,
            evaluations: 0,
            reduced,
        });
    }

    let waves = (0..=l_ref)
        .map(|l| RegularCoulomb::new(l, eta, k * settings.r_cut))
        .collect::<Result<Vec<_>>>()?;
    let factors: Vec<Complex64> = (0..=l_ref)
        .map(|l| {
            let sigma = crate::special::coulomb_phase(l, eta);
            let minus_i_pow = Complex64::new(0.0, -1.0).powu(l);
            (2.0 / PI).sqrt() / k * (2 * l + 1) as f64 / (4.0 * PI) * minus_i_pow * Complex64::from_polar(1.0, sigma)
        })
        .collect();
    let k_hat = continuum.direction();

    // ψ*(r) depends on r only through |r| and k̂·r̂; the radial coefficients
    // are cached for the most recent radius.
    let cache = std::cell::RefCell::new((f64::NAN, Vec::<Complex64>::new()));
    let coeffs_at = |r: f64| {
        let mut c = cache.borrow_mut();
        if c.0 != r {
            let rho = k * r;
            c.1 = waves
                .iter()
                .zip(&factors)
                .map(|(w, f)| f * (w.value(rho) / r))
                .collect();
            c.0 = r;
        }
        c.1.clone()
    };
    let f = |r: f64, theta: f64, phi: f64| {
        let p = point(r, theta, phi);
        let x = (k_hat[0] * p[0] + k_hat[1] * p[1] + k_hat[2] * p[2]) / r;
        let a = coeffs_at(r);
        let pl = legendre_polynomials(l_ref as usize, x.clamp(-1.0, 1.0));
        let psi: Complex64 = a.iter().zip(&pl).map(|(c, p)| c * p).sum();
        psi * p[2] * state.value(p)
    };
    let q = integrate_ball(f, k, settings, reduced);
    finish(q, tail, reduced, settings)
}

/// The integrand the closed forms resolve, with the fitted radial functions:
/// `J_{l,m}` for spherical states, `ℐ_{l,m}` for cartesian ones.
pub fn partial_integral_numeric(
    lm: AngularIndex,
    state: &InitialState,
    basis: &ComplexGaussianBasis,
    k_index: usize,
    settings: &QuadratureSettings,
) -> Result<NumericResult> {
    settings.validate()?;
    if lm.l() > basis.l_max() {
        return Err(Error::Config(format!("l = {} beyond basis l_max = {}", lm.l(), basis.l_max())));
    }
    let k = *basis
        .energies()
        .get(k_index)
        .ok_or_else(|| Error::Config(format!("energy index {k_index} outside basis grid")))?;
    if settings.r_cut < basis.r_max() {
        return Err(Error::Config(format!(
            "r_cut = {} below the fitting radius {}",
            settings.r_cut,
            basis.r_max()
        )));
    }
    // J carries Y_1^0 = √(3/4π) cos θ; ℐ carries z/r = cos θ.
    let angular = match state {
        InitialState::Spherical(_) => (3.0 / (4.0 * PI)).sqrt(),
        InitialState::Cartesian(_) => 1.0,
    };
    let coeff_sum: f64 = basis.coefficients(lm.l(), k_index)?.iter().map(|c| c.norm()).sum();
    let tail = 4.0
        * PI
        * angular
        * coeff_sum
        * ((2 * lm.l() + 1) as f64 / (4.0 * PI)).sqrt()
        * state_constant(state)
        * gaussian_tail(state.degree() + lm.l() + 3, state.beta(), r_len(state), settings.r_cut);

    let order = state.azimuthal_order();
    let reduced = settings.reduce_symmetric && order.is_some();
    if reduced && order != Some(lm.m()) {
        return Ok(NumericResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            tail_bound: tail,
            evaluations: 0,
            reduced,
        });
    }
    let cache = std::cell::RefCell::new((f64::NAN, Complex64::new(0.0, 0.0)));
    let radial = |r: f64| -> Result<Complex64> {
        let mut c = cache.borrow_mut();
        if c.0 != r {
            c.1 = basis.evaluate(lm.l(), k_index, r)?;
            c.0 = r;
        }
        Ok(c.1)
    };
    let f = |r: f64, theta: f64, phi: f64| {
        let p = point(r, theta, phi);
        let u = radial(r).expect("validated partial wave");
        u * spherical_harmonic(lm, theta, phi).conj() * angular * theta.cos() * state.value(p)
    };
    let q = integrate_ball(f, k, settings, reduced);
    finish(q, tail, reduced, settings)
}
