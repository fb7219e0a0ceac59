//! The fitted complex-Gaussian representation of the radial continuum and its
//! on-disk form.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use crate::error::{Error, Result};
use crate::types::short_digest;

pub const BASIS_FORMAT: &str = "cgint-basis";
pub const BASIS_VERSION: u32 = 1;

/// Conjugated radial continuum functions as
/// `(u_{l,k}(r))* = r^{l+1} Σ_s c_{l,k,s} e^{-α_{l,s} r²}`.
///
/// Exponents are shared by all energies of one partial wave; coefficients
/// are per `(l, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGaussianBasis {
    r_max: f64,
    charge: f64,
    seed: u64,
    energies: Vec<f64>,
    exponents: Vec<Vec<Complex64>>,
    coefficients: Vec<Vec<Vec<Complex64>>>,
    residuals: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    format: String,
    version: u32,
    n_gaussians: usize,
    l_max: u32,
    r_max: f64,
    charge: f64,
    seed: u64,
    energies: Vec<f64>,
    exponents: Vec<Vec<Complex64>>,
    coefficients: Vec<Vec<Vec<Complex64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residuals: Option<Vec<Vec<f64>>>,
}

impl ComplexGaussianBasis {
    /// Assemble and validate a basis. `exponents[l][s]`, `coefficients[l][k][s]`.
    pub fn from_parts(
        r_max: f64,
        charge: f64,
        energies: Vec<f64>,
        exponents: Vec<Vec<Complex64>>,
        coefficients: Vec<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        let basis = Self {
            r_max,
            charge,
            seed: 0,
            energies,
            exponents,
            coefficients,
            residuals: None,
        };
        basis.validate()?;
        Ok(basis)
    }

    pub(crate) fn with_fit_metadata(mut self, seed: u64, residuals: Vec<Vec<f64>>) -> Result<Self> {
        self.seed = seed;
        self.residuals = Some(residuals);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Format(m));
        if !(self.r_max > 0.0) {
            return bad(format!("r_max must be positive, got {}", self.r_max));
        }
        if self.energies.is_empty() {
            return bad("empty energy grid".into());
        }
        if self.energies.iter().any(|k| !(*k > 0.0)) || self.energies.windows(2).any(|w| w[1] <= w[0]) {
            return bad("energy grid must be positive and strictly increasing".into());
        }
        if self.exponents.is_empty() {
            return bad("no partial waves".into());
        }
        let n = self.exponents[0].len();
        if n == 0 {
            return bad("no Gaussians".into());
        }
        if self.coefficients.len() != self.exponents.len() {
            return bad("coefficient and exponent tables disagree on l_max".into());
        }
        for (l, (alphas, per_k)) in self.exponents.iter().zip(&self.coefficients).enumerate() {
            if alphas.len() != n {
                return bad(format!("l = {l}: {} exponents, expected {n}", alphas.len()));
            }
            if let Some(a) = alphas.iter().find(|a| !(a.re > 0.0) || !a.im.is_finite()) {
                return bad(format!("l = {l}: exponent {a} needs a positive real part"));
            }
            if per_k.len() != self.energies.len() {
                return bad(format!("l = {l}: coefficients for {} energies, expected {}", per_k.len(), self.energies.len()));
            }
            if per_k.iter().any(|c| c.len() != n || c.iter().any(|z| !z.is_finite())) {
                return bad(format!("l = {l}: malformed coefficient row"));
            }
        }
        if let Some(res) = &self.residuals {
            if res.len() != self.exponents.len() || res.iter().any(|r| r.len() != self.energies.len()) {
                return bad("residual table has the wrong shape".into());
            }
        }
        Ok(())
    }

    pub fn n_gaussians(&self) -> usize {
        self.exponents[0].len()
    }

    pub fn l_max(&self) -> u32 {
        (self.exponents.len() - 1) as u32
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Coulomb charge of the fitted targets.
    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn exponents(&self, l: u32) -> Result<&[Complex64]> {
        self.exponents
            .get(l as usize)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Index(format!("l = {l} beyond basis l_max = {}", self.l_max())))
    }

    pub fn coefficients(&self, l: u32, k_index: usize) -> Result<&[Complex64]> {
        let per_k = self
            .coefficients
            .get(l as usize)
            .ok_or_else(|| Error::Index(format!("l = {l} beyond basis l_max = {}", self.l_max())))?;
        per_k
            .get(k_index)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Index(format!("energy index {k_index} beyond {} energies", self.energies.len())))
    }

    /// Relative L² fit residuals `[l][k]`, when the basis came out of a fit.
    pub fn residuals(&self) -> Option<&[Vec<f64>]> {
        self.residuals.as_deref()
    }

    pub fn worst_residual(&self) -> Option<f64> {
        self.residuals
            .as_ref()
            .map(|r| r.iter().flatten().copied().fold(0.0, f64::max))
    }

    /// Index of `k_e` on the energy grid (relative match to 1e-10).
    pub fn energy_index(&self, k_e: f64) -> Option<usize> {
        self.energies
            .iter()
            .position(|k| (k - k_e).abs() <= 1e-10 * k_e.abs())
    }

    /// `r^{l+1} Σ_s c_s e^{-α_s r²}` for partial wave `l` at energy index `k_index`.
    pub fn evaluate(&self, l: u32, k_index: usize, r: f64) -> Result<Complex64> {
        let alphas = self.exponents(l)?;
        let coeffs = self.coefficients(l, k_index)?;
        let r2 = r * r;
        let sum: Complex64 = alphas
            .iter()
            .zip(coeffs)
            .map(|(a, c)| c * (-a * r2).exp())
            .sum();
        Ok(sum * r.powi(l as i32 + 1))
    }

    fn to_file(&self) -> BasisFile {
        BasisFile {
            format: BASIS_FORMAT.into(),
            version: BASIS_VERSION,
            n_gaussians: self.n_gaussians(),
            l_max: self.l_max(),
            r_max: self.r_max,
            charge: self.charge,
            seed: self.seed,
            energies: self.energies.clone(),
            exponents: self.exponents.clone(),
            coefficients: self.coefficients.clone(),
            residuals: self.residuals.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_file())?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: BasisFile = serde_json::from_str(text)?;
        if f.format != BASIS_FORMAT || f.version != BASIS_VERSION {
            return Err(Error::Format(format!("unsupported basis format {} v{}", f.format, f.version)));
        }
        let basis = Self {
            r_max: f.r_max,
            charge: f.charge,
            seed: f.seed,
            energies: f.energies,
            exponents: f.exponents,
            coefficients: f.coefficients,
            residuals: f.residuals,
        };
        basis.validate()?;
        if basis.n_gaussians() != f.n_gaussians || basis.l_max() != f.l_max {
            return Err(Error::Format("declared N / l_max disagree with the arrays".into()));
        }
        Ok(basis)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Short hex digest of the serialized basis.
    pub fn digest(&self) -> String {
        short_digest(self.to_json().expect("basis serializes").as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> ComplexGaussianBasis {
        ComplexGaussianBasis::from_parts(
            25.0,
            1.0,
            vec![0.5],
            vec![vec![Complex64::new(1.0, 0.0)]],
            vec![vec![vec![Complex64::new(1.0, 0.0)]]],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_single_gaussian() {
        let b = single();
        let v = b.evaluate(0, 0, 1.0).unwrap();
        assert!((v.re - (-1.0f64).exp()).abs() < 1e-15 && v.im == 0.0);
        let tiny = b.evaluate(0, 0, 1e-6).unwrap();
        assert!((tiny.re - 1e-6).abs() < 1e-15);
        assert!(matches!(b.evaluate(1, 0, 1.0), Err(Error::Index(_))));
        assert!(matches!(b.evaluate(0, 1, 1.0), Err(Error::Index(_))));
    }

    #[test]
    fn rejects_non_decaying_exponent() {
        let r = ComplexGaussianBasis::from_parts(
            25.0,
            1.0,
            vec![0.5],
            vec![vec![Complex64::new(0.0, 1.0)]],
            vec![vec![vec![Complex64::new(1.0, 0.0)]]],
        );
        assert!(matches!(r, Err(Error::Format(_))));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let b = ComplexGaussianBasis::from_parts(
            25.0,
            1.0,
            vec![0.5, 0.75],
            vec![vec![Complex64::new(0.1 + 1e-17, 0.3), Complex64::new(1.0 / 3.0, -2.0)]],
            vec![vec![
                vec![Complex64::new(1e-300, -0.0), Complex64::new(7.0, 1.0 / 7.0)],
                vec![Complex64::new(-3.5, 2.25), Complex64::new(0.0, 5e20)],
            ]],
        )
        .unwrap()
        .with_fit_metadata(42, vec![vec![1e-3, 2.5e-4]])
        .unwrap();
        let first = b.to_json().unwrap();
        let back = ComplexGaussianBasis::from_json(&first).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_json().unwrap(), first);
        assert!(first.contains("\"exponents\""));
    }
}
