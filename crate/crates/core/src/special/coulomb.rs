//! Regular Coulomb wave functions `F_l(η, ρ)` and Coulomb phase shifts.
//!
//! `F_l` is started from its power series near the origin, with the exact
//! normalization constant
//! `C_l(η) = 2^l e^{-πη/2} |Γ(l+1+iη)| / (2l+1)!`, and carried outward by a
//! Taylor-series integrator of the radial equation
//! `u'' = (l(l+1)/ρ² + 2η/ρ - 1) u`. The Taylor coefficients of every step
//! are kept, which gives machine-precision dense output anywhere on the
//! integrated interval.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::factorial::{ln_factorial, ln_gamma_complex};

/// Parameter box in which `F_l` is evaluated.
pub const COULOMB_L_MAX: u32 = 60;
pub const COULOMB_ETA_MAX: f64 = 20.0;
pub const COULOMB_RHO_MAX: f64 = 2000.0;

const SERIES_START: f64 = 0.5;
const MAX_STEP: f64 = 1.0;
const MAX_TAYLOR_TERMS: usize = 90;

/// Coulomb phase shift `σ_l(η) = arg Γ(l + 1 + iη)`, taken on the branch that
/// is continuous in `η` and vanishes at `η = 0`.
pub fn coulomb_phase(l: u32, eta: f64) -> f64 {
    if eta == 0.0 {
        return 0.0;
    }
    ln_gamma_complex(Complex64::new(l as f64 + 1.0, eta)).im
}

/// `ln C_l(η)`.
fn ln_normalization(l: u32, eta: f64) -> f64 {
    // |Γ(1+iη)|² e^{-πη} = 2πη / (e^{2πη} - 1)
    let x = 2.0 * PI * eta;
    let gamow = if x.abs() < 1e-300 {
        1.0_f64.ln()
    } else if x > 0.0 {
        // Stable for large positive η.
        x.ln() - x - (-(-x).exp_m1()).ln()
    } else {
        (x / x.exp_m1()).ln()
    };
    let mut ln_mod = 0.5 * gamow;
    for j in 1..=l {
        ln_mod += 0.5 * ((j * j) as f64 + eta * eta).ln();
    }
    l as f64 * std::f64::consts::LN_2 + ln_mod - ln_factorial(2 * l + 1)
}

fn check_domain(l: u32, eta: f64) -> Result<()> {
    if l > COULOMB_L_MAX || !eta.is_finite() || eta.abs() > COULOMB_ETA_MAX {
        return Err(Error::Domain(format!(
            "Coulomb function outside l <= {COULOMB_L_MAX}, |eta| <= {COULOMB_ETA_MAX}: l = {l}, eta = {eta}"
        )));
    }
    Ok(())
}

/// Power series `F_l` and `dF_l/dρ` at small `ρ`.
fn series_value(l: u32, eta: f64, rho: f64) -> (f64, f64) {
    let c = ln_normalization(l, eta);
    let lf = l as f64;
    // F = C ρ^{l+1} Σ_j A_j ρ^j, j(2l+1+j) A_j = 2η A_{j-1} - A_{j-2}
    let mut a_prev2 = 0.0;
    let mut a_prev = 1.0;
    let mut s = 1.0;
    let mut ds = lf + 1.0;
    let mut pw = 1.0;
    let mut last = f64::INFINITY;
    for j in 1..400 {
        let jf = j as f64;
        let a = (2.0 * eta * a_prev - a_prev2) / (jf * (2.0 * lf + 1.0 + jf));
        pw *= rho;
        let t = a * pw;
        s += t;
        ds += (lf + 1.0 + jf) * t;
        // Two consecutive negligible terms: with η = 0 every odd term vanishes.
        if t.abs().max(last) < 1e-18 * s.abs() {
            break;
        }
        last = t.abs();
        a_prev2 = a_prev;
        a_prev = a;
    }
    let base = (c + lf * rho.ln()).exp();
    (base * rho * s, base * ds)
}

#[derive(Clone, Debug)]
struct TaylorNode {
    origin: f64,
    reach: f64,
    coeffs: Vec<f64>,
}

impl TaylorNode {
    fn eval(&self, rho: f64) -> (f64, f64) {
        let x = rho - self.origin;
        let mut v = 0.0;
        let mut d = 0.0;
        for c in self.coeffs.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    }
}

/// Dense regular Coulomb function for one `(l, η)` on `(0, ρ_max]`.
#[derive(Clone, Debug)]
pub struct RegularCoulomb {
    l: u32,
    eta: f64,
    rho_max: f64,
    series_limit: f64,
    nodes: Vec<TaylorNode>,
}

impl RegularCoulomb {
    pub fn new(l: u32, eta: f64, rho_max: f64) -> Result<Self> {
        check_domain(l, eta)?;
        if !(rho_max > 0.0) || rho_max > COULOMB_RHO_MAX {
            return Err(Error::Domain(format!("Coulomb rho_max {rho_max} outside (0, {COULOMB_RHO_MAX}]")));
        }
        let series_limit = SERIES_START.min(rho_max);
        let (mut u, mut du) = series_value(l, eta, series_limit);
        let mut nodes = Vec::new();
        let mut rho = series_limit;
        let big_l = (l * (l + 1)) as f64;
        while rho < rho_max {
            let h = (0.5 * rho).min(MAX_STEP).min(rho_max - rho);
            let coeffs = taylor_coefficients(big_l, eta, rho, u, du, h);
            let node = TaylorNode { origin: rho, reach: h, coeffs };
            let (nu, ndu) = node.eval(rho + h);
            nodes.push(node);
            u = nu;
            du = ndu;
            rho += h;
        }
        Ok(Self {
            l,
            eta,
            rho_max,
            series_limit,
            nodes,
        })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    /// `F_l(η, ρ)` and its derivative; `ρ` must lie in `(0, ρ_max]`.
    pub fn value_and_derivative(&self, rho: f64) -> (f64, f64) {
        debug_assert!(rho > 0.0 && rho <= self.rho_max * (1.0 + 1e-12));
        if rho <= self.series_limit || self.nodes.is_empty() {
            return series_value(self.l, self.eta, rho);
        }
        let idx = self.nodes.partition_point(|n| n.origin <= rho);
        let node = &self.nodes[idx.saturating_sub(1)];
        debug_assert!(rho <= node.origin + node.reach * (1.0 + 1e-9));
        node.eval(rho)
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.value_and_derivative(rho).0
    }
}

/// Taylor coefficients of the solution about `rho0` from
/// `ρ² u'' = (L + 2ηρ - ρ²) u` with `ρ = rho0 + x`.
fn taylor_coefficients(big_l: f64, eta: f64, rho0: f64, u: f64, du: f64, h: f64) -> Vec<f64> {
    let mut a = Vec::with_capacity(MAX_TAYLOR_TERMS);
    a.push(u);
    a.push(du);
    let c0 = big_l + 2.0 * eta * rho0 - rho0 * rho0;
    let c1 = 2.0 * eta - 2.0 * rho0;
    let r2 = rho0 * rho0;
    let scale = u.abs() + du.abs() * h;
    let mut small = 0;
    for n in 0..MAX_TAYLOR_TERMS - 2 {
        let nf = n as f64;
        let an = a[n];
        let an1 = a[n + 1];
        let am1 = if n >= 1 { a[n - 1] } else { 0.0 };
        let am2 = if n >= 2 { a[n - 2] } else { 0.0 };
        let next = (c0 * an + c1 * am1 - am2 - 2.0 * rho0 * (nf + 1.0) * nf * an1 - nf * (nf - 1.0) * an)
            / (r2 * (nf + 2.0) * (nf + 1.0));
        a.push(next);
        let mag = next.abs() * h.powi(n as i32 + 2);
        if mag <= 1e-18 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    a
}

/// Regular Coulomb function `F_l(η, ρ)`.
pub fn coulomb_wave(l: u32, eta: f64, rho: f64) -> Result<f64> {
    check_domain(l, eta)?;
    if !(rho > 0.0) || rho > COULOMB_RHO_MAX {
        return Err(Error::Domain(format!("Coulomb rho = {rho} outside (0, {COULOMB_RHO_MAX}]")));
    }
    if rho <= SERIES_START {
        return Ok(series_value(l, eta, rho).0);
    }
    Ok(RegularCoulomb::new(l, eta, rho)?.value(rho))
}

/// `F_l(η, ρ_i)` for many radii with one outward integration.
pub fn coulomb_wave_many(l: u32, eta: f64, rhos: &[f64]) -> Result<Vec<f64>> {
    let rho_max = rhos.iter().copied().fold(0.0_f64, f64::max);
    if rhos.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Domain("Coulomb radii must be positive".into()));
    }
    let table = RegularCoulomb::new(l, eta, rho_max)?;
    Ok(rhos.iter().map(|&r| table.value(r)).collect())
}

/// Spherical Bessel function `j_l(x)` for `x > 0`: ascending series below
/// `x = l`, upward recurrence from `j_0, j_1` above it.
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    if x <= (l as f64).max(1.0) {
        let lf = l as f64;
        let mut term = (lf * x.ln() - ln_double_factorial_odd(2 * l + 1)).exp();
        let mut sum = term;
        let q = -0.5 * x * x;
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * (2.0 * lf + 2.0 * kf + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let (s, c) = x.sin_cos();
    let mut j0 = s / x;
    if l == 0 {
        return j0;
    }
    let mut j1 = s / (x * x) - c / x;
    for n in 1..l {
        let j2 = (2 * n + 1) as f64 / x * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    j1
}

fn ln_double_factorial_odd(n: u32) -> f64 {
    let mut acc = 0.0;
    let mut k = n;
    while k > 1 {
        acc += (k as f64).ln();
        k -= 2;
    }
    acc
}
