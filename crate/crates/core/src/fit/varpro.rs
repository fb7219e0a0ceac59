//! Variable-projection Levenberg-Marquardt fit of shared complex exponents.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ComplexGaussianBasis, RadialGrid};
use crate::error::{Error, Result};

/// Optimizer settings for [`fit_basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    /// Number of multi-start runs per partial wave.
    pub starts: usize,
    /// Levenberg-Marquardt trial steps allowed per start.
    pub max_iterations: usize,
    /// Relative L² residual above which the fit is reported as a soft failure.
    pub residual_ceiling: f64,
    /// Relative singular-value cutoff of the linear solve.
    pub svd_cutoff: f64,
    /// `Re α = re_floor + e^t`.
    pub re_floor: f64,
    /// Span of the initial real-part ladder; defaults to `[1/(2 r_max²), 1]`.
    pub re_span: Option<(f64, f64)>,
    /// Span of the initial `|Im α|` ladder; defaults to `[k_min/(4 r_max), k_max/4]`.
    pub im_span: Option<(f64, f64)>,
    /// Relative cost decrease below which three consecutive steps stop a start.
    pub stop_tolerance: f64,
    /// Exponents per partial wave from a previous (smaller) fit, tried as an extra start.
    pub warm_start: Option<Vec<Vec<Complex64>>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            starts: 2,
            max_iterations: 250,
            residual_ceiling: 1e-2,
            svd_cutoff: 1e-12,
            re_floor: 1e-4,
            re_span: None,
            im_span: None,
            stop_tolerance: 1e-9,
            warm_start: None,
        }
    }
}

const T_MIN: f64 = -16.0;
const T_MAX: f64 = 7.0;
const IM_MAX: f64 = 1e3;

/// Fit `n_gaussians` complex Gaussians per partial wave to every target of
/// `targets`, sharing exponents across energies.
///
/// Deterministic for a given `seed`. When some `(l, k)` residual stays above
/// `options.residual_ceiling` the best basis is returned inside
/// [`Error::FitCeiling`].
pub fn fit_basis(
    targets: &RadialGrid,
    n_gaussians: usize,
    seed: u64,
    options: &FitOptions,
) -> Result<ComplexGaussianBasis> {
    if n_gaussians == 0 {
        return Err(Error::Config("n_gaussians must be at least 1".into()));
    }
    if options.starts == 0 && options.warm_start.is_none() {
        return Err(Error::Config("at least one start is required".into()));
    }
    if let Some(w) = &options.warm_start {
        if w.len() <= targets.l_max() as usize {
            return Err(Error::Config("warm start lacks exponents for some partial waves".into()));
        }
        if w.iter().any(|a| a.len() > n_gaussians) {
            return Err(Error::Config("warm start has more exponents than requested".into()));
        }
    }

    let per_l: Vec<WaveFit> = (0..=targets.l_max())
        .into_par_iter()
        .map(|l| fit_wave(targets, l, n_gaussians, seed, options))
        .collect();

    let exponents = per_l.iter().map(|w| w.alphas.clone()).collect();
    let coefficients = per_l.iter().map(|w| w.coefficients.clone()).collect();
    let residuals: Vec<Vec<f64>> = per_l.iter().map(|w| w.residuals.clone()).collect();
    let basis = ComplexGaussianBasis::from_parts(
        targets.r_max(),
        targets.charge(),
        targets.energies().to_vec(),
        exponents,
        coefficients,
    )?
    .with_fit_metadata(seed, residuals)?;

    let worst = basis.worst_residual().unwrap_or(0.0);
    if worst > options.residual_ceiling {
        return Err(Error::FitCeiling {
            best: Box::new(basis),
            worst,
            ceiling: options.residual_ceiling,
        });
    }
    Ok(basis)
}

struct WaveFit {
    alphas: Vec<Complex64>,
    coefficients: Vec<Vec<Complex64>>,
    residuals: Vec<f64>,
    cost: f64,
}

fn fit_wave(targets: &RadialGrid, l: u32, n: usize, seed: u64, options: &FitOptions) -> WaveFit {
    let problem = Problem::new(targets, l, options);
    let energies = targets.energies();
    let re_span = options
        .re_span
        .unwrap_or((0.5 / (targets.r_max() * targets.r_max()), 1.0));
    let im_span = options.im_span.unwrap_or((
        energies[0] / (4.0 * targets.r_max()),
        energies[energies.len() - 1] / 4.0,
    ));

    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    if let Some(w) = &options.warm_start {
        let prev = &w[l as usize];
        let mut a = prev.clone();
        a.extend(ladder(n - prev.len(), re_span, im_span));
        starts.push(a);
    }
    for s in 0..options.starts {
        let mut a = ladder(n, re_span, im_span);
        if s > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ (u64::from(l) << 32) ^ (s as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            for z in &mut a {
                z.re *= rng.random_range(-0.25..0.25_f64).exp();
                z.im *= rng.random_range(-0.25..0.25_f64).exp();
            }
        }
        starts.push(a);
    }

    let mut best: Option<WaveFit> = None;
    for start in starts {
        let fit = problem.levenberg_marquardt(start, options);
        // Strict improvement only: ties keep the earliest start.
        if best.as_ref().is_none_or(|b| fit.cost < b.cost) {
            best = Some(fit);
        }
    }
    best.expect("at least one start")
}

/// Conjugate pairs `a_j ± i b_j` on geometric ladders, small real parts
/// paired with slow oscillations.
fn ladder(n: usize, re_span: (f64, f64), im_span: (f64, f64)) -> Vec<Complex64> {
    let pairs = n / 2;
    let geo = |lo: f64, hi: f64, m: usize, j: usize| {
        if m <= 1 {
            (lo * hi).sqrt()
        } else {
            lo * (hi / lo).powf(j as f64 / (m - 1) as f64)
        }
    };
    let mut out = Vec::with_capacity(n);
    for j in 0..pairs {
        out.push(Complex64::new(geo(re_span.0, re_span.1, pairs, j), geo(im_span.0, im_span.1, pairs, j)));
    }
    for j in 0..pairs {
        out.push(Complex64::new(geo(re_span.0, re_span.1, pairs, j), -geo(im_span.0, im_span.1, pairs, j)));
    }
    if n % 2 == 1 {
        out.push(Complex64::new((re_span.0 * re_span.1).sqrt(), 0.0));
    }
    out
}

struct Problem {
    r2: Vec<f64>,
    prefactor: Vec<f64>,
    targets: DMatrix<Complex64>,
    target_norms: Vec<f64>,
    cutoff: f64,
    re_floor: f64,
}

struct Projection {
    u: DMatrix<Complex64>,
    inv_s: Vec<f64>,
    v_t: DMatrix<Complex64>,
    phi: DMatrix<Complex64>,
    coefficients: DMatrix<Complex64>,
    residual: DMatrix<Complex64>,
    cost: f64,
}

impl Problem {
    fn new(targets: &RadialGrid, l: u32, options: &FitOptions) -> Self {
        let points = targets.points();
        let nk = targets.energies().len();
        let y = DMatrix::from_fn(points.len(), nk, |i, k| targets.values(l, k)[i]);
        let target_norms = (0..nk).map(|k| y.column(k).norm()).collect();
        Self {
            r2: points.iter().map(|r| r * r).collect(),
            prefactor: points.iter().map(|r| r.powi(l as i32 + 1)).collect(),
            targets: y,
            target_norms,
            cutoff: options.svd_cutoff,
            re_floor: options.re_floor,
        }
    }

    fn alphas(&self, theta: &[f64]) -> Vec<Complex64> {
        let n = theta.len() / 2;
        (0..n)
            .map(|j| Complex64::new(self.re_floor + theta[j].exp(), theta[n + j]))
            .collect()
    }

    fn parameters(&self, alphas: &[Complex64]) -> Vec<f64> {
        let mut theta: Vec<f64> = alphas
            .iter()
            .map(|a| (a.re - self.re_floor).max(T_MIN.exp()).ln().clamp(T_MIN, T_MAX))
            .collect();
        theta.extend(alphas.iter().map(|a| a.im.clamp(-IM_MAX, IM_MAX)));
        theta
    }

    fn project(&self, alphas: &[Complex64]) -> Projection {
        let npts = self.r2.len();
        let n = alphas.len();
        let phi = DMatrix::from_fn(npts, n, |i, j| (-alphas[j] * self.r2[i]).exp() * self.prefactor[i]);

        let (u_full, s, v_t_full) = if npts >= n {
            let qr = phi.clone().qr();
            let q = qr.q();
            let svd = qr.r().svd(true, true);
            (q * svd.u.expect("u requested"), svd.singular_values, svd.v_t.expect("v_t requested"))
        } else {
            let svd = phi.clone().svd(true, true);
            (svd.u.expect("u requested"), svd.singular_values, svd.v_t.expect("v_t requested"))
        };
        let s_max = s.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..s.len())
            .filter(|&i| s[i] > self.cutoff * s_max && s[i] > 0.0)
            .collect();
        let u = u_full.select_columns(&keep);
        let v_t = v_t_full.select_rows(&keep);
        let inv_s: Vec<f64> = keep.iter().map(|&i| 1.0 / s[i]).collect();

        let uh_y = u.adjoint() * &self.targets;
        let residual = &self.targets - &u * &uh_y;
        let mut scaled = uh_y;
        for (row, is) in inv_s.iter().enumerate() {
            scaled.row_mut(row).scale_mut(*is);
        }
        let coefficients = v_t.adjoint() * scaled;
        let cost = 0.5 * residual.norm_squared();
        Projection {
            u,
            inv_s,
            v_t,
            phi,
            coefficients,
            residual,
            cost,
        }
    }

    /// Normal equations `JᵀJ`, `Jᵀρ` of the real-stacked projected residual
    /// with the full Golub-Pereyra derivative of the projector.
    fn normal_equations(&self, p: &Projection, theta: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
        let npts = self.r2.len();
        let nk = self.targets.ncols();
        let n = theta.len() / 2;

        // dΦ/dα_j column and its projection onto the residual space.
        let mut d = p.phi.clone();
        for (i, r2) in self.r2.iter().enumerate() {
            d.row_mut(i).scale_mut(-r2);
        }
        let pd = &d - &p.u * (p.u.adjoint() * &d);
        // (Φ⁺)ᴴ = U S⁻¹ Vᴴ
        let mut sv = p.v_t.clone();
        for (row, is) in p.inv_s.iter().enumerate() {
            sv.row_mut(row).scale_mut(*is);
        }
        let w = &p.u * sv;
        let s_mat = d.adjoint() * &p.residual;

        let rows = 2 * npts * nk;
        let mut jac = DMatrix::<f64>::zeros(rows, 2 * n);
        let i_unit = Complex64::i();
        for j in 0..n {
            let dalpha_t = Complex64::new(theta[j].exp(), 0.0);
            for (col, dalpha) in [(j, dalpha_t), (n + j, i_unit)] {
                let mut column = jac.column_mut(col);
                for k in 0..nk {
                    let a = dalpha * p.coefficients[(j, k)];
                    let b = dalpha.conj() * s_mat[(j, k)];
                    for i in 0..npts {
                        let v = -(a * pd[(i, j)] + b * w[(i, j)]);
                        let row = 2 * (k * npts + i);
                        column[row] = v.re;
                        column[row + 1] = v.im;
                    }
                }
            }
        }
        let mut rvec = DVector::<f64>::zeros(rows);
        for k in 0..nk {
            for i in 0..npts {
                let v = p.residual[(i, k)];
                let row = 2 * (k * npts + i);
                rvec[row] = v.re;
                rvec[row + 1] = v.im;
            }
        }
        (jac.tr_mul(&jac), jac.tr_mul(&rvec))
    }

    fn levenberg_marquardt(&self, start: Vec<Complex64>, options: &FitOptions) -> WaveFit {
        let mut theta = self.parameters(&start);
        let mut current = self.project(&self.alphas(&theta));
        let floor = 1e-30 * self.targets.norm_squared();
        let mut mu = 1e-3;
        let mut trials = 0;
        let mut stalled = 0;

        'outer: while trials < options.max_iterations && current.cost > floor {
            let (jtj, jtr) = self.normal_equations(&current, &theta);
            let max_diag = (0..jtj.nrows()).map(|i| jtj[(i, i)]).fold(0.0, f64::max);
            if max_diag == 0.0 {
                break;
            }
            loop {
                trials += 1;
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += mu * jtj[(i, i)].max(1e-10 * max_diag);
                }
                let Some(chol) = a.cholesky() else {
                    mu *= 10.0;
                    if mu > 1e16 || trials >= options.max_iterations {
                        break 'outer;
                    }
                    continue;
                };
                let step = chol.solve(&(-&jtr));
                let n = theta.len() / 2;
                let trial: Vec<f64> = theta
                    .iter()
                    .zip(step.iter())
                    .enumerate()
                    .map(|(idx, (t, s))| {
                        if idx < n {
                            (t + s).clamp(T_MIN, T_MAX)
                        } else {
                            (t + s).clamp(-IM_MAX, IM_MAX)
                        }
                    })
                    .collect();
                let candidate = self.project(&self.alphas(&trial));
                if candidate.cost.is_finite() && candidate.cost < current.cost {
                    let gain = (current.cost - candidate.cost) / current.cost;
                    theta = trial;
                    current = candidate;
                    mu = (mu / 3.0).max(1e-15);
                    if gain < options.stop_tolerance {
                        stalled += 1;
                        if stalled >= 3 {
                            break 'outer;
                        }
                    } else {
                        stalled = 0;
                    }
                    break;
                }
                mu *= 4.0;
                if mu > 1e16 || trials >= options.max_iterations {
                    break 'outer;
                }
            }
        }

        let alphas = self.alphas(&theta);
        let nk = self.targets.ncols();
        let coefficients = (0..nk)
            .map(|k| current.coefficients.column(k).iter().copied().collect())
            .collect();
        let residuals = (0..nk)
            .map(|k| {
                let norm = self.target_norms[k];
                let r = current.residual.column(k).norm();
                if norm > 0.0 {
                    r / norm
                } else {
                    r
                }
            })
            .collect();
        WaveFit {
            alphas,
            coefficients,
            residuals,
            cost: current.cost,
        }
    }
}
