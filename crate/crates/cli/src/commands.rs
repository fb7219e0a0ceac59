//! The five verbs. Every report is deterministic for a given configuration:
//! rows are computed in parallel but collected in input order, and no timing
//! information is written.

use std::fmt::Write as _;

use cgint::cgtf::amplitude_cartesian;
use cgint::identities::run_suites;
use cgint::oracle::amplitude_numeric;
use cgint::sgtf::amplitude_spherical;
use cgint::{
    build_targets, fit_basis, ComplexGaussianBasis, ContinuumSpec, Error, InitialState, TransitionResult,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// What a command hands back to `main`: the text to emit and whether the run
/// is a soft failure that must exit nonzero.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FitReport {
    format: &'static str,
    config_digest: String,
    basis_path: String,
    basis_digest: String,
    n_gaussians: usize,
    l_max: u32,
    r_max: f64,
    charge: f64,
    seed: u64,
    energies: Vec<f64>,
    /// `[l][k]` relative L² residuals.
    residuals: Vec<Vec<f64>>,
    worst_residual: f64,
    residual_ceiling: f64,
    soft_failure: bool,
}

pub fn fit(cfg: &RunConfig) -> Result<Output, CliError> {
    let f = &cfg.fit;
    let targets = build_targets(cfg.continuum.charge, f.l_max, &f.energies, &cfg.grid_policy())?;
    let (basis, soft) = match fit_basis(&targets, f.n_gaussians, f.seed, &cfg.fit_options()) {
        Ok(b) => (b, false),
        Err(Error::FitCeiling { best, .. }) => (*best, true),
        Err(e) => return Err(e.into()),
    };
    basis.write(&cfg.output.basis)?;
    let worst = basis.worst_residual().unwrap_or(0.0);
    let report = FitReport {
        format: "cgint-fit-report",
        config_digest: cfg.digest(),
        basis_path: cfg.output.basis.display().to_string(),
        basis_digest: basis.digest(),
        n_gaussians: basis.n_gaussians(),
        l_max: basis.l_max(),
        r_max: basis.r_max(),
        charge: basis.charge(),
        seed: basis.seed(),
        energies: basis.energies().to_vec(),
        residuals: basis.residuals().map(<[_]>::to_vec).unwrap_or_default(),
        worst_residual: worst,
        residual_ceiling: f.residual_ceiling,
        soft_failure: soft,
    };
    Ok(Output {
        text: json(&report),
        failure: soft.then(|| format!("fit residual {worst:e} above ceiling {:e}", f.residual_ceiling)),
    })
}

fn load_basis(cfg: &RunConfig) -> Result<ComplexGaussianBasis, CliError> {
    let path = &cfg.output.basis;
    if !path.exists() {
        return Err(CliError::Config(format!("basis file {} not found; run `cgint fit` first", path.display())));
    }
    Ok(ComplexGaussianBasis::read(path)?)
}

/// Energy indices to evaluate: the whole basis grid, or the configured `k_e`.
fn energy_indices(cfg: &RunConfig, basis: &ComplexGaussianBasis) -> Result<Vec<usize>, CliError> {
    match cfg.continuum.k_e {
        None => Ok((0..basis.energies().len()).collect()),
        Some(k) => basis
            .energy_index(k)
            .map(|i| vec![i])
            .ok_or_else(|| CliError::Config(format!("k_e = {k} is not on the basis energy grid {:?}", basis.energies()))),
    }
}

fn continuum(cfg: &RunConfig, k_e: f64) -> Result<ContinuumSpec, CliError> {
    Ok(ContinuumSpec::new(k_e, cfg.continuum.direction, cfg.continuum.charge, cfg.continuum.l_max)?)
}

/// An amplitude with its partial terms, possibly a weighted combination of
/// several closed-form evaluations.
#[derive(Clone, Serialize)]
struct PathResult {
    amplitude: Complex64,
    partials: Vec<Partial>,
}

#[derive(Clone, Serialize)]
struct Partial {
    l: u32,
    m: i32,
    value: Complex64,
}

impl PathResult {
    fn combine(parts: &[(Complex64, TransitionResult)]) -> Self {
        let mut partials: Vec<Partial> = parts[0]
            .1
            .partials()
            .iter()
            .map(|(lm, _)| Partial { l: lm.l(), m: lm.m(), value: Complex64::new(0.0, 0.0) })
            .collect();
        let mut amplitude = Complex64::new(0.0, 0.0);
        for (w, t) in parts {
            amplitude += w * t.amplitude();
            for (p, (_, v)) in partials.iter_mut().zip(t.partials()) {
                p.value += w * v;
            }
        }
        Self { amplitude, partials }
    }

    fn truncated_norm_sqr(&self, l_max: u32) -> f64 {
        self.partials.iter().filter(|p| p.l <= l_max).map(|p| p.value).sum::<Complex64>().norm_sqr()
    }
}

struct ClosedForms {
    sph: Option<PathResult>,
    cart: Option<PathResult>,
    digest: String,
}

/// Both closed forms where the state can be written in the other family.
fn closed_forms(state: &InitialState, c: &ContinuumSpec, basis: &ComplexGaussianBasis, k: usize) -> Result<ClosedForms, CliError> {
    let one = Complex64::new(1.0, 0.0);
    Ok(match state {
        InitialState::Spherical(s) => {
            let direct = amplitude_spherical(s, c, basis, k)?;
            let digest = direct.digest().to_string();
            let cart = match s.cartesian_components() {
                Some(parts) => Some(PathResult::combine(
                    &parts
                        .iter()
                        .map(|(w, p)| Ok((*w, amplitude_cartesian(p, c, basis, k)?)))
                        .collect::<Result<Vec<_>, Error>>()?,
                )),
                None => None,
            };
            ClosedForms { sph: Some(PathResult::combine(&[(one, direct)])), cart, digest }
        }
        InitialState::Cartesian(s) => {
            let direct = amplitude_cartesian(s, c, basis, k)?;
            let digest = direct.digest().to_string();
            let sph = match s.spherical_components() {
                Some(parts) => Some(PathResult::combine(
                    &parts
                        .iter()
                        .map(|(w, p)| Ok((*w, amplitude_spherical(p, c, basis, k)?)))
                        .collect::<Result<Vec<_>, Error>>()?,
                )),
                None => None,
            };
            ClosedForms { sph, cart: Some(PathResult::combine(&[(one, direct)])), digest }
        }
    })
}

impl ClosedForms {
    fn primary(&self) -> &PathResult {
        self.sph.as_ref().or(self.cart.as_ref()).expect("at least one path")
    }

    /// `|T_sph - T_cart| / max(|T_sph|, |T_cart|)` when both paths exist.
    fn discrepancy(&self) -> Option<f64> {
        let (a, b) = (self.sph.as_ref()?.amplitude, self.cart.as_ref()?.amplitude);
        let scale = a.norm().max(b.norm());
        Some(if scale == 0.0 { 0.0 } else { (a - b).norm() / scale })
    }
}

#[derive(Serialize)]
struct AmplitudeRow {
    k_e: f64,
    k_index: usize,
    beta: f64,
    l_max: u32,
    spherical: Option<PathResult>,
    cartesian: Option<PathResult>,
    t2_sph: Option<f64>,
    t2_cart: Option<f64>,
    sph_cart_disc: Option<f64>,
    digest: String,
}

#[derive(Serialize)]
struct RunHeader<T> {
    format: &'static str,
    config_digest: String,
    basis_digest: String,
    charge: f64,
    direction: [f64; 3],
    state: crate::config::StateConfig,
    rows: Vec<T>,
}

fn header<T>(format: &'static str, cfg: &RunConfig, basis: &ComplexGaussianBasis, rows: Vec<T>) -> RunHeader<T> {
    RunHeader {
        format,
        config_digest: cfg.digest(),
        basis_digest: basis.digest(),
        charge: cfg.continuum.charge,
        direction: cfg.continuum.direction,
        state: cfg.state.clone(),
        rows,
    }
}

pub fn amplitude(cfg: &RunConfig) -> Result<Output, CliError> {
    let basis = load_basis(cfg)?;
    let state = cfg.state()?;
    let rows = energy_indices(cfg, &basis)?
        .into_par_iter()
        .map(|k| {
            let k_e = basis.energies()[k];
            let c = continuum(cfg, k_e)?;
            let f = closed_forms(&state, &c, &basis, k)?;
            Ok(AmplitudeRow {
                k_e,
                k_index: k,
                beta: state.beta(),
                l_max: c.l_max(),
                t2_sph: f.sph.as_ref().map(|p| p.amplitude.norm_sqr()),
                t2_cart: f.cart.as_ref().map(|p| p.amplitude.norm_sqr()),
                sph_cart_disc: f.discrepancy(),
                spherical: f.sph,
                cartesian: f.cart,
                digest: f.digest,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Output { text: json(&header("cgint-amplitude-report", cfg, &basis, rows)), failure: None })
}

#[derive(Serialize)]
struct OracleSummary {
    value: Complex64,
    error: f64,
    tail_bound: f64,
    converged: bool,
}

/// One validated configuration.
struct Validation {
    k_e: f64,
    beta: f64,
    l_max: u32,
    forms: ClosedForms,
    oracle: OracleSummary,
}

impl Validation {
    fn t2_num(&self) -> f64 {
        self.oracle.value.norm_sqr()
    }

    fn rel_err_at(&self, l: u32) -> f64 {
        let t2 = self.t2_num();
        (t2 - self.forms.primary().truncated_norm_sqr(l)) / t2
    }
}

fn validate_one(cfg: &RunConfig, state: &InitialState, basis: &ComplexGaussianBasis, k: usize) -> Result<Validation, CliError> {
    let k_e = basis.energies()[k];
    let c = continuum(cfg, k_e)?;
    let forms = closed_forms(state, &c, basis, k)?;
    let oracle = match amplitude_numeric(state, &c, &cfg.quadrature()) {
        Ok(r) => OracleSummary { value: r.value, error: r.error, tail_bound: r.tail_bound, converged: true },
        Err(Error::Quadrature { value, estimate, .. }) => OracleSummary { value, error: estimate, tail_bound: f64::NAN, converged: false },
        Err(e) => return Err(e.into()),
    };
    Ok(Validation { k_e, beta: state.beta(), l_max: c.l_max(), forms, oracle })
}

fn oracle_failures(rows: &[Validation]) -> Option<String> {
    let bad: Vec<String> = rows
        .iter()
        .filter(|v| !v.oracle.converged)
        .map(|v| format!("(k_e={}, beta={})", v.k_e, v.beta))
        .collect();
    (!bad.is_empty()).then(|| format!("reference quadrature did not converge for {}", bad.join(", ")))
}

#[derive(Serialize)]
struct ValidateRow {
    k_e: f64,
    beta: f64,
    l_max: u32,
    t2_sph: Option<f64>,
    t2_cart: Option<f64>,
    t2_num: f64,
    /// `(|T_num|² - |T_cG|²) / |T_num|²` at the configured L.
    rel_err: f64,
    /// The same for every truncation `0..=L`.
    rel_err_by_l: Vec<f64>,
    /// Truncations `L` at which the error magnitude grows from `L` to `L+1`.
    non_monotonic_at: Vec<u32>,
    sph_cart_disc: Option<f64>,
    oracle: OracleSummary,
    digest: String,
}

pub fn validate(cfg: &RunConfig) -> Result<Output, CliError> {
    let basis = load_basis(cfg)?;
    let state = cfg.state()?;
    let results = energy_indices(cfg, &basis)?
        .into_par_iter()
        .map(|k| validate_one(cfg, &state, &basis, k))
        .collect::<Result<Vec<_>, CliError>>()?;
    let failure = oracle_failures(&results);
    let rows = results
        .into_iter()
        .map(|v| {
            let by_l: Vec<f64> = (0..=v.l_max).map(|l| v.rel_err_at(l)).collect();
            ValidateRow {
                k_e: v.k_e,
                beta: v.beta,
                l_max: v.l_max,
                t2_sph: v.forms.sph.as_ref().map(|p| p.amplitude.norm_sqr()),
                t2_cart: v.forms.cart.as_ref().map(|p| p.amplitude.norm_sqr()),
                t2_num: v.t2_num(),
                rel_err: *by_l.last().expect("l_max >= 0"),
                non_monotonic_at: (0..v.l_max).filter(|&l| by_l[l as usize + 1].abs() > by_l[l as usize].abs()).collect(),
                rel_err_by_l: by_l,
                sph_cart_disc: v.forms.discrepancy(),
                digest: v.forms.digest.clone(),
                oracle: v.oracle,
            }
        })
        .collect();
    Ok(Output { text: json(&header("cgint-validate-report", cfg, &basis, rows)), failure })
}

pub const SWEEP_HEADER: &str = "k_e,beta,L,|T|²_sph,|T|²_cart,|T|²_num,rel_err,sph_cart_disc,digest";

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let basis = load_basis(cfg)?;
    let base = cfg.state()?;
    let mut points = Vec::new();
    for &beta in &cfg.sweep.betas {
        let state = match base {
            InitialState::Spherical(s) => InitialState::Spherical(s.with_beta(beta)?),
            InitialState::Cartesian(s) => InitialState::Cartesian(s.with_beta(beta)?),
        };
        for k in energy_indices(cfg, &basis)? {
            points.push((state, k));
        }
    }
    let results = points
        .par_iter()
        .map(|(s, k)| validate_one(cfg, s, &basis, *k))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for v in &results {
        writeln!(
            text,
            "{},{},{},{},{},{:e},{:e},{},{}",
            v.k_e,
            v.beta,
            v.l_max,
            cell(v.forms.sph.as_ref().map(|p| p.amplitude.norm_sqr())),
            cell(v.forms.cart.as_ref().map(|p| p.amplitude.norm_sqr())),
            v.t2_num(),
            v.rel_err_at(v.l_max),
            cell(v.forms.discrepancy()),
            v.forms.digest
        )
        .expect("writing to a string");
    }
    Ok(Output { text, failure: oracle_failures(&results) })
}

#[derive(Serialize)]
struct IdentityReport {
    format: &'static str,
    seed: u64,
    all_passed: bool,
    suites: Vec<cgint::identities::SuiteReport>,
}

pub fn identities(cfg: &RunConfig) -> Result<Output, CliError> {
    let suites = run_suites(cfg.identities.seed, &cfg.identities.only)?;
    let failed: Vec<&str> = suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| format!("identity suites failed: {}", failed.join(", ")));
    let report = IdentityReport {
        format: "cgint-identity-report",
        seed: cfg.identities.seed,
        all_passed: failed.is_empty(),
        suites,
    };
    Ok(Output { text: json(&report), failure })
}

