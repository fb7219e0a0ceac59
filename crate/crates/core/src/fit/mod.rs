//! Complex-Gaussian representation of radial continuum functions.
//!
//! Targets are sampled on a radial grid ([`build_targets`]) and fitted per
//! partial wave by separable nonlinear least squares ([`fit_basis`]): the
//! linear coefficients are eliminated by projection and only the shared
//! complex exponents are searched.

mod basis;
mod varpro;

use num_complex::Complex64;

pub use basis::{ComplexGaussianBasis, BASIS_FORMAT, BASIS_VERSION};
pub use varpro::{fit_basis, FitOptions};

use crate::error::{Error, Result};
use crate::special::coulomb_wave_many;

/// Sampling policy for the fitting grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPolicy {
    pub r_max: f64,
    pub points: usize,
    /// Lower bound on samples per shortest oscillation period `2π / k_max`.
    pub min_points_per_period: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            r_max: 25.0,
            points: 2000,
            min_points_per_period: 20,
        }
    }
}

impl GridPolicy {
    /// Uniform radii `r_max * i / n`, `i = 1..=n`.
    pub fn radii(&self, k_max: f64) -> Vec<f64> {
        let periods = self.r_max * k_max / (2.0 * std::f64::consts::PI);
        let n = self
            .points
            .max((periods * self.min_points_per_period as f64).ceil() as usize)
            .max(1);
        (1..=n).map(|i| self.r_max * i as f64 / n as f64).collect()
    }
}

/// Samples of the conjugated radial targets `(u_{l,k}(r))*` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    charge: f64,
    points: Vec<f64>,
    energies: Vec<f64>,
    /// `values[l][k][i]`
    values: Vec<Vec<Vec<Complex64>>>,
}

impl RadialGrid {
    pub fn new(
        r_max: f64,
        charge: f64,
        points: Vec<f64>,
        energies: Vec<f64>,
        values: Vec<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        if points.is_empty() || values.is_empty() || energies.is_empty() {
            return Err(Error::Config("radial grid needs points, energies and targets".into()));
        }
        if points[0] <= 0.0 || points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("grid points must be positive and strictly increasing".into()));
        }
        if *points.last().unwrap() > r_max * (1.0 + 1e-12) {
            return Err(Error::Config(format!("grid extends beyond r_max = {r_max}")));
        }
        check_energies(&energies)?;
        for per_l in &values {
            if per_l.len() != energies.len() || per_l.iter().any(|v| v.len() != points.len()) {
                return Err(Error::Config("target array shape does not match (l, k, points)".into()));
            }
        }
        Ok(Self {
            r_max,
            charge,
            points,
            energies,
            values,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn l_max(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn values(&self, l: u32, k_index: usize) -> &[Complex64] {
        &self.values[l as usize][k_index]
    }
}

pub(crate) fn check_energies(energies: &[f64]) -> Result<()> {
    if energies.is_empty() {
        return Err(Error::Config("empty energy grid".into()));
    }
    if energies.iter().any(|k| !(*k > 0.0)) {
        return Err(Error::Config("energies must be positive".into()));
    }
    if energies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("energy grid must be strictly increasing".into()));
    }
    Ok(())
}

/// The evenly spaced wavenumber grid `k_i = start + step * i`, `i < count`.
pub fn energy_grid(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start + step * i as f64).collect()
}

/// Samples of the pure-Coulomb targets `F_l(η, k r)`, `η = -Z / k`, for
/// `l <= l_max` and every wavenumber. These are real, so conjugation is the
/// identity.
pub fn build_targets(charge: f64, l_max: u32, energies: &[f64], grid: &GridPolicy) -> Result<RadialGrid> {
    check_energies(energies)?;
    let k_max = *energies.last().unwrap();
    let points = grid.radii(k_max);
    let mut values = Vec::with_capacity(l_max as usize + 1);
    for l in 0..=l_max {
        let mut per_k = Vec::with_capacity(energies.len());
        for &k in energies {
            let rhos: Vec<f64> = points.iter().map(|r| k * r).collect();
            let f = coulomb_wave_many(l, -charge / k, &rhos)?;
            per_k.push(f.into_iter().map(Complex64::from).collect());
        }
        values.push(per_k);
    }
    RadialGrid::new(grid.r_max, charge, points, energies.to_vec(), values)
}
