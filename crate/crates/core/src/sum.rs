//! Compensated accumulation.

use num_complex::Complex64;
use std::iter::Sum;
use std::ops::AddAssign;

/// Neumaier (improved Kahan-Babuska) running sum of real values.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Compensated sum of complex values, real and imaginary parts carried independently.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: Neumaier,
    im: Neumaier,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for CompensatedSum {
    fn add_assign(&mut self, z: Complex64) {
        self.add(z);
    }
}

impl Sum<Complex64> for CompensatedSum {
    fn sum<I: Iterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}
