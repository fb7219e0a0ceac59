//! Double-double arithmetic (about 32 significant digits) built on
//! error-free transformations, for the per-Gaussian terms whose sum over the
//! basis cancels by many orders of magnitude.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};
const FRAC_PI_2: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123233995736766e-17,
};
const EPS: f64 = 1e-33;

impl Dd {
    pub(crate) const fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn from_parts(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact scaling by a power of two.
    fn ldexp(self, scale: f64) -> Self {
        Self {
            hi: self.hi * scale,
            lo: self.lo * scale,
        }
    }

    pub(crate) fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::new(if self.hi == 0.0 { 0.0 } else { f64::NAN });
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = (self - Self { hi: p, lo: e }).to_f64();
        Self::from_parts(s, r / (2.0 * s))
    }

    pub(crate) fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::new(0.0);
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * k).ldexp(1.0 / 1024.0);
        // expm1 on the reduced argument, then (1+s)² - 1 = 2s + s² ten times.
        let mut term = r;
        let mut s = r;
        for n in 2..=12 {
            term = term * r / (n as f64);
            s = s + term;
            if term.hi.abs() <= EPS * s.hi.abs() {
                break;
            }
        }
        for _ in 0..10 {
            s = s.ldexp(2.0) + s * s;
        }
        (s + Self::new(1.0)).ldexp(2f64.powi(k as i32))
    }

    pub(crate) fn sin_cos(self) -> (Self, Self) {
        let n = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2 * n;
        let r2 = r * r;
        let mut s = r;
        let mut term = r;
        let mut c = Self::new(1.0);
        let mut cterm = Self::new(1.0);
        for k in 1..40 {
            let kf = k as f64;
            term = -(term * r2) / ((2.0 * kf) * (2.0 * kf + 1.0));
            cterm = -(cterm * r2) / ((2.0 * kf - 1.0) * (2.0 * kf));
            s = s + term;
            c = c + cterm;
            if term.hi.abs() <= EPS && cterm.hi.abs() <= EPS {
                break;
            }
        }
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl Add for Dd {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::from_parts(s1, s2 + t2)
    }
}

impl Neg for Dd {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        Self::from_parts(p1, p2 + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Mul<f64> for Dd {
    type Output = Self;
    fn mul(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        Self::from_parts(p1, p2 + self.lo * b)
    }
}

impl Div for Dd {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        Self::from_parts(q1, q2) + Self::new(q3)
    }
}

impl Div<f64> for Dd {
    type Output = Self;
    fn div(self, b: f64) -> Self {
        self / Self::new(b)
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Cdd {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl Cdd {
    pub(crate) const ONE: Self = Self {
        re: Dd::new(1.0),
        im: Dd::new(0.0),
    };

    pub(crate) fn new(re: Dd, im: Dd) -> Self {
        Self { re, im }
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub(crate) fn norm_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub(crate) fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub(crate) fn scale(self, s: Dd) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    pub(crate) fn recip(self) -> Self {
        let d = self.norm_sqr();
        Self::new(self.re / d, -(self.im / d))
    }

    pub(crate) fn exp(self) -> Self {
        let e = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Self::new(e * c, e * s)
    }

    /// Principal square root.
    pub(crate) fn sqrt(self) -> Self {
        let m = self.norm_sqr().sqrt();
        if self.re.hi >= 0.0 {
            let t = ((m + self.re) / 2.0).sqrt();
            if t.hi == 0.0 {
                return Self::default();
            }
            Self::new(t, self.im / (t * 2.0))
        } else {
            let t = ((m - self.re) / 2.0).sqrt();
            let re = self.im.abs() / (t * 2.0);
            Self::new(re, if self.im.hi < 0.0 { -t } else { t })
        }
    }

    pub(crate) fn powu(self, mut n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// `z^{-h/2}` for `Re z > 0`, principal branch.
    pub(crate) fn pow_neg_half(self, h: u32) -> Self {
        let inv = self.recip();
        let whole = inv.powu(h / 2);
        if h % 2 == 1 {
            whole * inv.sqrt()
        } else {
            whole
        }
    }
}

impl From<Complex64> for Cdd {
    fn from(z: Complex64) -> Self {
        Self::new(Dd::new(z.re), Dd::new(z.im))
    }
}

impl From<Dd> for Cdd {
    fn from(x: Dd) -> Self {
        Self::new(x, Dd::new(0.0))
    }
}

impl Add for Cdd {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for Cdd {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl Neg for Cdd {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for Cdd {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self::new(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)
    }
}

impl Mul<f64> for Cdd {
    type Output = Self;
    fn mul(self, b: f64) -> Self {
        Self::new(self.re * b, self.im * b)
    }
}

impl Div for Cdd {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, b: Self) -> Self {
        self * b.recip()
    }
}

/// `₁F₁(a; b; z)` in double-double, Kummer-transformed for `Re z < 0`.
pub(crate) fn kummer_1f1_dd(a: f64, b: f64, z: Cdd) -> Result<Cdd> {
    if z.re.hi < 0.0 {
        return Ok(z.exp() * kummer_1f1_dd(b - a, b, -z)?);
    }
    let zn = z.norm_f64();
    let mut sum = Cdd::ONE;
    let mut term = Cdd::ONE;
    let mut small_run = 0;
    for n in 0..10_000 {
        let nf = n as f64;
        let ratio = Dd::new(a + nf) / (Dd::new(b + nf) * (nf + 1.0));
        term = (term * z).scale(ratio);
        sum = sum + term;
        if nf + 1.0 > zn && term.norm_f64() <= EPS * sum.norm_f64() {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        iterations: 10_000,
        partial: sum.to_c64(),
        bound: term.norm_f64(),
    })
}
