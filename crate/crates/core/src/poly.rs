//! Dense real polynomials in one variable, coefficients stored lowest degree first.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<f64>);

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![1.0])
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c t^n`.
    pub fn monomial(n: usize, c: f64) -> Self {
        let mut v = vec![0.0; n + 1];
        v[n] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.0.get(n).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn scale(&self, c: f64) -> Self {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Multiplication by the variable.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(0.0);
        v.extend_from_slice(&self.0);
        Poly(v)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn integral(&self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(0.0);
        v.extend(self.0.iter().enumerate().map(|(i, c)| c / (i + 1) as f64));
        Poly::new(v)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Composition `self(inner(t))`.
    pub fn compose(&self, inner: &Poly) -> Self {
        self.0
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| &(&acc * inner) + &Poly::constant(c))
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl From<Vec<f64>> for Poly {
    fn from(v: Vec<f64>) -> Self {
        Poly::new(v)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0.0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

/// Binomial coefficient `C(n, k)` as a float.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Generalized binomial coefficient `C(a, j)` for real `a`.
pub fn gen_binomial(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a - i as f64) / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let p = Poly::new(vec![1.0, 2.0]);
        let q = Poly::new(vec![-1.0, 0.0, 3.0]);
        let pq = &p * &q;
        for &t in &[-1.3, 0.0, 0.7, 2.0] {
            assert!((pq.eval(t) - p.eval(t) * q.eval(t)).abs() < 1e-12);
            assert!(((&p + &q).eval(t) - p.eval(t) - q.eval(t)).abs() < 1e-12);
        }
        assert!((&p - &p).is_zero());
        assert_eq!(p.shift().coeffs(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn calculus() {
        let p = Poly::new(vec![1.0, -2.0, 0.5, 4.0]);
        assert_eq!(p.integral().derivative(), p);
        assert_eq!(p.derivative().coeffs(), &[-2.0, 1.0, 12.0]);
    }

    #[test]
    fn compose_matches_eval() {
        let p = Poly::new(vec![0.3, -1.0, 2.0]);
        let q = Poly::new(vec![1.0, 1.0]);
        let pq = p.compose(&q);
        assert!((pq.eval(0.4) - p.eval(1.4)).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert!((gen_binomial(-0.5, 2) - 0.375).abs() < 1e-15);
        assert!((gen_binomial(4.0, 2) - binomial(4, 2)).abs() < 1e-15);
    }
}
