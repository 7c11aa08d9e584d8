//! Truncated formal power series with real coefficients.

use std::ops::{Add, Mul, Sub};

/// `Σ_{m ≤ order} c_m x^m`; everything above `order` is discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<f64>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![0.0; order + 1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<f64>, order: usize) -> Self {
        coeffs.resize(order + 1, 0.0);
        Series { coeffs }
    }

    /// The series `x`.
    pub fn identity(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = 1.0;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> f64 {
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn pow(&self, n: usize) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self ∘ inner`; requires `inner` to vanish at 0.
    pub fn compose(&self, inner: &Series) -> Series {
        assert!(inner.coeff(0) == 0.0, "inner series must vanish at 0");
        let order = self.order().min(inner.order());
        let mut acc = Series::zero(order);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc.coeffs[0] += c;
        }
        acc
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|m| self.coeffs[m] + rhs.coeffs[m]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|m| self.coeffs[m] - rhs.coeffs[m]).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let mut out = vec![0.0; order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Series { coeffs: out }
    }
}
