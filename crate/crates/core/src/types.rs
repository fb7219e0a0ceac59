//! Small value types shared by every module.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Orbital angular momentum `l` with magnetic quantum number `m`, `|m| <= l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u32, i32)", into = "(u32, i32)")]
pub struct AngularIndex {
    l: u32,
    m: i32,
}

impl AngularIndex {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(Self { l, m })
    }

    pub fn l(self) -> u32 {
        self.l
    }

    pub fn m(self) -> i32 {
        self.m
    }

    /// All `(l, m)` pairs with `l <= l_max`, in lexicographic order.
    pub fn up_to(l_max: u32) -> impl Iterator<Item = AngularIndex> {
        (0..=l_max).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| AngularIndex { l, m }))
    }
}

impl TryFrom<(u32, i32)> for AngularIndex {
    type Error = Error;

    fn try_from((l, m): (u32, i32)) -> Result<Self> {
        AngularIndex::new(l, m)
    }
}

impl From<AngularIndex> for (u32, i32) {
    fn from(v: AngularIndex) -> Self {
        (v.l, v.m)
    }
}

impl fmt::Display for AngularIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.l, self.m)
    }
}

/// Real cartesian vector in atomic units.
pub type Vec3 = [f64; 3];

/// First 8 bytes of the SHA-256 of `bytes`, as hex.
pub fn short_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A point of C^3. Solid harmonics and the translated Gaussian centers live here.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Complex3Vector {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl Complex3Vector {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    pub fn from_real(v: Vec3) -> Self {
        Self {
            x: v[0].into(),
            y: v[1].into(),
            z: v[2].into(),
        }
    }

    /// Unconjugated bilinear product `x^2 + y^2 + z^2`.
    pub fn self_dot(&self) -> Complex64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

impl Add for Complex3Vector {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Complex3Vector {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Complex3Vector {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Complex64> for Complex3Vector {
    type Output = Self;

    fn mul(self, s: Complex64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<f64> for Complex3Vector {
    type Output = Self;

    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}
