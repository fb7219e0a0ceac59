//! Run configuration: a TOML file whose every table is optional, plus
//! command-line overrides. Defaults reproduce the 1s benchmark protocol.

use std::path::{Path, PathBuf};

use cgint::fit::energy_grid;
use cgint::oracle::QuadratureSettings;
use cgint::{AngularIndex, CartesianGaussianState, FitOptions, GridPolicy, InitialState, SphericalGaussianState};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub state: StateConfig,
    pub continuum: ContinuumConfig,
    pub fit: FitConfig,
    pub sweep: SweepConfig,
    pub tolerances: ToleranceConfig,
    pub identities: IdentityConfig,
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Sgtf,
    Cgtf,
}

/// Bound state. `n`, `l`, `m` apply to `sgtf`, `powers` to `cgtf`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateConfig {
    pub kind: StateKind,
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub powers: [u32; 3],
    pub beta: f64,
    pub center: [f64; 3],
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            kind: StateKind::Sgtf,
            n: 0,
            l: 0,
            m: 0,
            powers: [0, 0, 0],
            beta: 0.05,
            center: [0.0, 0.0, 1.0],
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContinuumConfig {
    /// Coulomb charge Z; η = -Z/k_e.
    pub charge: f64,
    /// Photoelectron direction, normalized on load.
    pub direction: [f64; 3],
    /// Partial-wave truncation L.
    pub l_max: u32,
    /// Restrict `amplitude` and `validate` to one energy of the basis grid.
    pub k_e: Option<f64>,
}

impl Default for ContinuumConfig {
    fn default() -> Self {
        Self {
            charge: 1.0,
            direction: [0.0, 0.0, 1.0],
            l_max: 5,
            k_e: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    pub n_gaussians: usize,
    pub l_max: u32,
    pub r_max: f64,
    pub energies: Vec<f64>,
    pub seed: u64,
    pub starts: usize,
    pub max_iterations: usize,
    pub residual_ceiling: f64,
    pub grid_points: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        let o = FitOptions::default();
        Self {
            n_gaussians: 30,
            l_max: 5,
            r_max: 25.0,
            energies: energy_grid(0.5, 0.25, 6),
            seed: 7,
            starts: o.starts,
            max_iterations: o.max_iterations,
            residual_ceiling: o.residual_ceiling,
            grid_points: GridPolicy::default().points,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub betas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            betas: vec![0.05, 0.1, 0.5, 1.0],
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub r_cut: f64,
    pub reference_l_max: u32,
    pub max_subdivisions: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let q = QuadratureSettings::default();
        Self {
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
            r_cut: q.r_cut,
            reference_l_max: q.reference_l_max,
            max_subdivisions: q.max_subdivisions,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentityConfig {
    pub seed: u64,
    pub only: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub basis: PathBuf,
    pub out: Option<PathBuf>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            basis: PathBuf::from("basis.json"),
            out: None,
        }
    }
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub basis: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol_rel: Option<f64>,
    pub only: Vec<String>,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(s) = overrides.seed {
            cfg.fit.seed = s;
            cfg.identities.seed = s;
        }
        if let Some(b) = &overrides.basis {
            cfg.output.basis = b.clone();
        }
        if let Some(o) = &overrides.out {
            cfg.output.out = Some(o.clone());
        }
        if let Some(t) = overrides.tol_rel {
            cfg.tolerances.rel_tol = t;
        }
        if !overrides.only.is_empty() {
            cfg.identities.only = overrides.only.clone();
        }
        cfg.normalize()?;
        Ok(cfg)
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must be rejected
    fn normalize(&mut self) -> Result<(), CliError> {
        let d = self.continuum.direction;
        let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(len > 0.0 && len.is_finite()) {
            return Err(config_error("continuum.direction must be a nonzero vector"));
        }
        self.continuum.direction = d.map(|x| x / len);
        if !self.continuum.charge.is_finite() {
            return Err(config_error("continuum.charge must be finite"));
        }
        let e = &self.fit.energies;
        if e.is_empty() || e.iter().any(|k| !(*k > 0.0)) || e.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_error("fit.energies must be positive and strictly increasing"));
        }
        if self.fit.n_gaussians == 0 || !(self.fit.r_max > 0.0) {
            return Err(config_error("fit.n_gaussians and fit.r_max must be positive"));
        }
        if self.sweep.betas.iter().any(|b| !(*b > 0.0)) {
            return Err(config_error("sweep.betas must be positive"));
        }
        self.quadrature().validate().map_err(|e| config_error(e.to_string()))?;
        self.state().map(|_| ())
    }

    pub fn state(&self) -> Result<InitialState, CliError> {
        let s = &self.state;
        let r = match s.kind {
            StateKind::Sgtf => AngularIndex::new(s.l, s.m)
                .and_then(|lm| SphericalGaussianState::new(s.n, lm, s.beta, s.center))
                .map(InitialState::Spherical),
            StateKind::Cgtf => CartesianGaussianState::new(s.powers, s.beta, s.center).map(InitialState::Cartesian),
        };
        r.map_err(|e| config_error(format!("state: {e}")))
    }

    pub fn quadrature(&self) -> QuadratureSettings {
        let t = &self.tolerances;
        QuadratureSettings {
            abs_tol: t.abs_tol,
            rel_tol: t.rel_tol,
            max_subdivisions: t.max_subdivisions,
            r_cut: t.r_cut,
            reference_l_max: t.reference_l_max,
            ..QuadratureSettings::default()
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            starts: self.fit.starts,
            max_iterations: self.fit.max_iterations,
            residual_ceiling: self.fit.residual_ceiling,
            ..FitOptions::default()
        }
    }

    pub fn grid_policy(&self) -> GridPolicy {
        GridPolicy {
            r_max: self.fit.r_max,
            points: self.fit.grid_points,
            ..GridPolicy::default()
        }
    }

    /// Digest of the resolved configuration.
    pub fn digest(&self) -> String {
        cgint::types::short_digest(serde_json::to_string(self).expect("config serializes").as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg: RunConfig = toml::from_str("").unwrap();
        assert_eq!(cfg.state.beta, 0.05);
        assert_eq!(cfg.fit.energies, vec![0.5, 0.75, 1.0, 1.25, 1.5, 1.75]);
        assert_eq!(cfg.continuum.charge, 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("[fit]\nn_gausians = 3\n").is_err());
    }

    #[test]
    fn direction_is_normalized() {
        let mut cfg: RunConfig = toml::from_str("[continuum]\ndirection = [0.0, 3.0, 4.0]\n").unwrap();
        cfg.normalize().unwrap();
        assert_eq!(cfg.continuum.direction, [0.0, 0.6, 0.8]);
    }

    #[test]
    fn decreasing_energies_are_rejected() {
        let mut cfg: RunConfig = toml::from_str("[fit]\nenergies = [1.0, 0.5]\n").unwrap();
        assert!(matches!(cfg.normalize(), Err(CliError::Config(_))));
    }
}
