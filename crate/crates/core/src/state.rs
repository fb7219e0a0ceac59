//! Bound initial states: spherical and cartesian Gaussian-type functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::harmonic_polynomial_real;
use crate::types::{AngularIndex, Vec3};

fn check_beta_center(beta: f64, center: Vec3) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!("Gaussian exponent beta = {beta} must be positive")));
    }
    if center.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("non-finite center".into()));
    }
    Ok(())
}

/// `(r·r)^n 𝒴_l^m(r) e^{-β r²}` placed at `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalGaussianState {
    n: u32,
    lm: AngularIndex,
    beta: f64,
    center: Vec3,
}

impl SphericalGaussianState {
    pub fn new(n: u32, lm: AngularIndex, beta: f64, center: Vec3) -> Result<Self> {
        check_beta_center(beta, center)?;
        Ok(Self { n, lm, beta, center })
    }

    /// s-type Gaussian `𝒴_0^0 e^{-β(r-R)²} = e^{-β(r-R)²} / (2√π)`.
    pub fn s_type(beta: f64, center: Vec3) -> Result<Self> {
        Self::new(0, AngularIndex::new(0, 0)?, beta, center)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lm(&self) -> AngularIndex {
        self.lm
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    /// Same state moved to `center`.
    pub fn with_center(&self, center: Vec3) -> Result<Self> {
        Self::new(self.n, self.lm, self.beta, center)
    }

    /// Same state with exponent `beta`.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.n, self.lm, beta, self.center)
    }

    /// `Φ(r - R)` at the point `r`.
    pub fn value(&self, r: Vec3) -> Complex64 {
        let d = sub(r, self.center);
        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        harmonic_polynomial_real(self.n, self.lm, d) * (-self.beta * d2).exp()
    }

    /// This state as `Σ w · CGTF` when `n = 0` and `l ≤ 1`.
    pub fn cartesian_components(&self) -> Option<Vec<(Complex64, CartesianGaussianState)>> {
        if self.n != 0 || self.lm.l() > 1 {
            return None;
        }
        let make = |powers| CartesianGaussianState::new(powers, self.beta, self.center).expect("validated state");
        let re = |v: f64| Complex64::new(v, 0.0);
        let c1 = (3.0 / (8.0 * PI)).sqrt();
        Some(match self.lm.m() {
            _ if self.lm.l() == 0 => vec![(re(0.5 / PI.sqrt()), make([0, 0, 0]))],
            0 => vec![(re((3.0 / (4.0 * PI)).sqrt()), make([0, 0, 1]))],
            1 => vec![(re(-c1), make([1, 0, 0])), (Complex64::new(0.0, -c1), make([0, 1, 0]))],
            _ => vec![(re(c1), make([1, 0, 0])), (Complex64::new(0.0, -c1), make([0, 1, 0]))],
        })
    }
}

/// `x^{n_x} y^{n_y} z^{n_z} e^{-β r²}` placed at `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianGaussianState {
    powers: [u32; 3],
    beta: f64,
    center: Vec3,
}

impl CartesianGaussianState {
    pub fn new(powers: [u32; 3], beta: f64, center: Vec3) -> Result<Self> {
        check_beta_center(beta, center)?;
        Ok(Self { powers, beta, center })
    }

    pub fn powers(&self) -> [u32; 3] {
        self.powers
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn with_center(&self, center: Vec3) -> Result<Self> {
        Self::new(self.powers, self.beta, center)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.powers, beta, self.center)
    }

    pub fn value(&self, r: Vec3) -> Complex64 {
        let d = sub(r, self.center);
        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let poly: f64 = (0..3).map(|a| d[a].powi(self.powers[a] as i32)).product();
        Complex64::new(poly * (-self.beta * d2).exp(), 0.0)
    }

    /// This state as `Σ w · SGTF` when its total power is at most 1:
    /// `1 = 2√π 𝒴_0^0`, `z = √(4π/3) 𝒴_1^0`,
    /// `x = √(2π/3)(𝒴_1^{-1} - 𝒴_1^1)`, `y = i√(2π/3)(𝒴_1^{-1} + 𝒴_1^1)`.
    pub fn spherical_components(&self) -> Option<Vec<(Complex64, SphericalGaussianState)>> {
        let make = |l: u32, m: i32| {
            SphericalGaussianState::new(0, AngularIndex::new(l, m).expect("valid"), self.beta, self.center)
                .expect("validated state")
        };
        let c1 = (2.0 * PI / 3.0).sqrt();
        let re = |v: f64| Complex64::new(v, 0.0);
        match self.powers {
            [0, 0, 0] => Some(vec![(re(2.0 * PI.sqrt()), make(0, 0))]),
            [0, 0, 1] => Some(vec![(re((4.0 * PI / 3.0).sqrt()), make(1, 0))]),
            [1, 0, 0] => Some(vec![(re(c1), make(1, -1)), (re(-c1), make(1, 1))]),
            [0, 1, 0] => Some(vec![
                (Complex64::new(0.0, c1), make(1, -1)),
                (Complex64::new(0.0, c1), make(1, 1)),
            ]),
            _ => None,
        }
    }
}

/// Either family of bound state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    Spherical(SphericalGaussianState),
    Cartesian(CartesianGaussianState),
}

impl InitialState {
    pub fn beta(&self) -> f64 {
        match self {
            Self::Spherical(s) => s.beta(),
            Self::Cartesian(c) => c.beta(),
        }
    }

    pub fn center(&self) -> Vec3 {
        match self {
            Self::Spherical(s) => s.center(),
            Self::Cartesian(c) => c.center(),
        }
    }

    pub fn value(&self, r: Vec3) -> Complex64 {
        match self {
            Self::Spherical(s) => s.value(r),
            Self::Cartesian(c) => c.value(r),
        }
    }

    /// Highest total polynomial degree of the state about its center.
    pub(crate) fn degree(&self) -> u32 {
        match self {
            Self::Spherical(s) => 2 * s.n() + s.lm().l(),
            Self::Cartesian(c) => c.powers().iter().sum(),
        }
    }

    /// True when the state is symmetric about the z axis through the origin:
    /// `φ`-dependence reduces to a single `e^{i m φ}`.
    pub(crate) fn azimuthal_order(&self) -> Option<i32> {
        let c = self.center();
        if c[0] != 0.0 || c[1] != 0.0 {
            return None;
        }
        match self {
            Self::Spherical(s) => Some(s.lm().m()),
            Self::Cartesian(cs) => (cs.powers()[0] == 0 && cs.powers()[1] == 0).then_some(0),
        }
    }
}

impl From<SphericalGaussianState> for InitialState {
    fn from(s: SphericalGaussianState) -> Self {
        Self::Spherical(s)
    }
}

impl From<CartesianGaussianState> for InitialState {
    fn from(c: CartesianGaussianState) -> Self {
        Self::Cartesian(c)
    }
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_exponent() {
        assert!(SphericalGaussianState::s_type(0.0, [0.0; 3]).is_err());
        assert!(CartesianGaussianState::new([0, 0, 0], -1.0, [0.0; 3]).is_err());
        assert!(CartesianGaussianState::new([0, 0, 0], 1.0, [f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn low_cartesian_states_decompose() {
        let r0 = [0.3, -0.2, 0.9];
        for powers in [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            let c = CartesianGaussianState::new(powers, 0.7, r0).unwrap();
            let parts = c.spherical_components().unwrap();
            for p in [[0.1, 0.5, -0.4], [1.3, -0.7, 2.0]] {
                let sum: Complex64 = parts.iter().map(|(w, s)| w * s.value(p)).sum();
                assert!((sum - c.value(p)).norm() < 1e-14, "{powers:?}");
            }
        }
        assert!(CartesianGaussianState::new([1, 1, 0], 1.0, r0).unwrap().spherical_components().is_none());
    }

    #[test]
    fn low_spherical_states_decompose() {
        let r0 = [0.3, -0.2, 0.9];
        for (l, m) in [(0, 0), (1, -1), (1, 0), (1, 1)] {
            let s = SphericalGaussianState::new(0, AngularIndex::new(l, m).unwrap(), 0.7, r0).unwrap();
            let parts = s.cartesian_components().unwrap();
            for p in [[0.1, 0.5, -0.4], [1.3, -0.7, 2.0]] {
                let sum: Complex64 = parts.iter().map(|(w, c)| w * c.value(p)).sum();
                assert!((sum - s.value(p)).norm() < 1e-14, "{l} {m}");
            }
        }
        let d = SphericalGaussianState::new(0, AngularIndex::new(2, 0).unwrap(), 1.0, r0).unwrap();
        assert!(d.cartesian_components().is_none());
    }
}
