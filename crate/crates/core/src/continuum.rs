//! Continuum specification and the transition-amplitude result type.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fit::ComplexGaussianBasis;
use crate::special::{coulomb_phase, solid_harmonic_real};
use crate::sum::CompensatedSum;
use crate::types::{short_digest, AngularIndex, Vec3};

/// Final Coulomb continuum `ψ_k` truncated at `l_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumSpec {
    k_e: f64,
    direction: Vec3,
    charge: f64,
    l_max: u32,
    phases: Vec<f64>,
}

impl ContinuumSpec {
    /// `direction` must be a unit vector to 1e-12. The Sommerfeld parameter is
    /// `η = -charge / k_e`.
    pub fn new(k_e: f64, direction: Vec3, charge: f64, l_max: u32) -> Result<Self> {
        if !(k_e.is_finite() && k_e > 0.0) {
            return Err(Error::Domain(format!("k_e = {k_e} must be positive")));
        }
        if !charge.is_finite() {
            return Err(Error::Domain("non-finite charge".into()));
        }
        let len = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        if !((len - 1.0).abs() <= 1e-12) {
            return Err(Error::Domain(format!("direction has length {len}, expected 1")));
        }
        let eta = -charge / k_e;
        let phases = (0..=l_max).map(|l| coulomb_phase(l, eta)).collect();
        Ok(Self {
            k_e,
            direction,
            charge,
            l_max,
            phases,
        })
    }

    /// Continuum with `k̂ = ẑ`.
    pub fn along_z(k_e: f64, charge: f64, l_max: u32) -> Result<Self> {
        Self::new(k_e, [0.0, 0.0, 1.0], charge, l_max)
    }

    pub fn k_e(&self) -> f64 {
        self.k_e
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn eta(&self) -> f64 {
        -self.charge / self.k_e
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Coulomb phase shifts `σ_0 ..= σ_{l_max}`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `(-i)^l e^{iσ_l} Y_l^m(k̂)`.
    pub fn wave_factor(&self, lm: AngularIndex) -> Complex64 {
        let l = lm.l();
        let minus_i_pow = match l % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        minus_i_pow * Complex64::from_polar(1.0, self.phases[l as usize]) * solid_harmonic_real(lm, self.direction)
    }

    /// Ensures `basis` describes this continuum at `k_index`.
    pub fn check_basis(&self, basis: &ComplexGaussianBasis, k_index: usize) -> Result<()> {
        let k = *basis.energies().get(k_index).ok_or_else(|| {
            Error::Config(format!("energy index {k_index} outside basis grid of {}", basis.energies().len()))
        })?;
        if (k - self.k_e).abs() > 1e-10 * self.k_e {
            return Err(Error::Config(format!(
                "continuum k_e = {} does not match basis energy {k} at index {k_index}",
                self.k_e
            )));
        }
        if (basis.charge() - self.charge).abs() > 1e-12 * self.charge.abs().max(1.0) {
            return Err(Error::Config(format!(
                "continuum charge {} differs from basis charge {}",
                self.charge,
                basis.charge()
            )));
        }
        if self.l_max > basis.l_max() {
            return Err(Error::Config(format!(
                "continuum l_max = {} exceeds basis l_max = {}",
                self.l_max,
                basis.l_max()
            )));
        }
        Ok(())
    }
}

/// Transition amplitude with its per-`(l, m)` contributions in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionResult {
    amplitude: Complex64,
    partials: Vec<(AngularIndex, Complex64)>,
    digest: String,
}

impl TransitionResult {
    pub(crate) fn from_partials(mut partials: Vec<(AngularIndex, Complex64)>, digest: String) -> Self {
        partials.sort_by_key(|(lm, _)| *lm);
        let amplitude = partials.iter().map(|(_, t)| *t).sum::<CompensatedSum>().value();
        Self {
            amplitude,
            partials,
            digest,
        }
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn partials(&self) -> &[(AngularIndex, Complex64)] {
        &self.partials
    }

    pub fn partial(&self, lm: AngularIndex) -> Option<Complex64> {
        self.partials.iter().find(|(k, _)| *k == lm).map(|(_, v)| *v)
    }

    /// Amplitude with the partial-wave sum cut at `l <= l_max`.
    pub fn truncated(&self, l_max: u32) -> Complex64 {
        self.partials
            .iter()
            .filter(|(lm, _)| lm.l() <= l_max)
            .map(|(_, t)| *t)
            .sum::<CompensatedSum>()
            .value()
    }

    /// Identifier of the state, continuum and basis that produced this result.
    pub fn digest(&self) -> &str {
        &self.digest
    }
}

pub(crate) fn config_digest(state: &impl std::fmt::Debug, continuum: &ContinuumSpec, basis: &ComplexGaussianBasis) -> String {
    short_digest(format!("{state:?}|{continuum:?}|{}", basis.digest()).as_bytes())
}
