//! The Wiener-Hopf algebra is not preserved by the unitary of a
//! diffeomorphism whose derivative blows up.
//!
//! With `T_i = λ(f̂_i)P` and `(Uξ)(x) = u'(x)^{1/2} ξ(u(x))`, the operator
//! `T₁ − U⁻¹T₂U` is applied to translates `ξ_n = ξ(· − n·spacing)` of a
//! bump supported in `[0, width]`. The translation-invariant term has the
//! constant norm `a = ‖f̂₁ * ξ‖₂`. The pulled-back term has norm
//! `‖f̂₂ * PUξ_n‖₂ = ‖f₂ η_n‖₂`, where `η̂_n = PUξ_n`, and on the Fourier side
//! `‖f₂ η_n‖_∞ ≤ ‖Uξ_n‖₁` shrinks as the support of `Uξ_n` narrows.
//!
//! Every integral is done in the variable `y = u(x)` on the bump support, so
//! the narrowing support never has to be resolved on a fixed grid.

use super::line::LineFunction;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diffeo {
    /// `scale·x + shift`.
    Affine { scale: f64, shift: f64 },
    /// `sinh(rate·x)/rate`, so `u'(x) = cosh(rate·x)`.
    Sinh { rate: f64 },
}

impl Diffeo {
    pub fn identity() -> Self {
        Diffeo::Affine { scale: 1.0, shift: 0.0 }
    }

    /// Orientation-preserving diffeomorphisms of the line only.
    pub fn check(&self) -> Result<()> {
        match *self {
            Diffeo::Affine { scale, shift } if scale > 0.0 && scale.is_finite() && shift.is_finite() => Ok(()),
            Diffeo::Sinh { rate } if rate > 0.0 && rate.is_finite() => Ok(()),
            Diffeo::Affine { scale, .. } => {
                Err(Error::InadmissibleDiffeomorphism(format!("affine map with scale {scale} is not orientation preserving")))
            }
            Diffeo::Sinh { rate } => Err(Error::InadmissibleDiffeomorphism(format!("sinh rate {rate} must be positive"))),
        }
    }

    /// Whether `u'(x) → ∞` as `x → ∞`.
    pub fn derivative_unbounded(&self) -> bool {
        matches!(self, Diffeo::Sinh { .. })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Diffeo::Affine { scale, shift } => scale * x + shift,
            Diffeo::Sinh { rate } => (rate * x).sinh() / rate,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Diffeo::Affine { scale, .. } => scale,
            Diffeo::Sinh { rate } => (rate * x).cosh(),
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            Diffeo::Affine { scale, shift } => (y - shift) / scale,
            Diffeo::Sinh { rate } => (rate * y).asinh() / rate,
        }
    }

    /// `(u⁻¹)'(y)`.
    pub fn inverse_derivative(&self, y: f64) -> f64 {
        match *self {
            Diffeo::Affine { scale, .. } => 1.0 / scale,
            Diffeo::Sinh { rate } => 1.0 / (rate * y).hypot(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonPreservationSetup {
    pub u: Diffeo,
    /// Gaussian or zero.
    pub f1: LineFunction,
    pub f2: LineFunction,
    /// `ξ(y) = c·sin²(πy/width)` on `[0, width]`, unit `L²` norm.
    pub bump_width: f64,
    pub spacing: f64,
    pub n_max: usize,
}

impl Default for NonPreservationSetup {
    fn default() -> Self {
        NonPreservationSetup {
            u: Diffeo::Sinh { rate: 1.0 },
            f1: LineFunction::gaussian(1.0, 0.0, 1.0),
            f2: LineFunction::gaussian(1.0, 0.0, 1.0),
            bump_width: 1.0,
            spacing: 1.5,
            n_max: 120,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub n: usize,
    /// `‖(T₁ − U⁻¹T₂U)ξ_n‖₂`.
    pub norm: f64,
    /// `‖T₁ξ_n‖₂`.
    pub translation_term: f64,
    /// `‖U⁻¹T₂Uξ_n‖₂`.
    pub pulled_back_l2: f64,
    /// `sup |f₂ η_n|` on the Fourier side.
    pub pulled_back_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonPreservationReport {
    pub a: f64,
    pub derivative_unbounded: bool,
    pub rows: Vec<DemoRow>,
}

/// Convolution kernel `f̂` of a multiplier and the half-width of its effective support.
#[derive(Debug, Clone)]
struct Kernel {
    f: LineFunction,
    half_width: f64,
}

impl Kernel {
    fn new(f: &LineFunction) -> Result<Self> {
        match *f {
            LineFunction::Zero => Ok(Kernel { f: f.clone(), half_width: 0.0 }),
            LineFunction::Gaussian { width, .. } if width > 0.0 => {
                Ok(Kernel { f: f.clone(), half_width: (-(1e-17f64).ln() / PI).sqrt() / width })
            }
            _ => Err(Error::InvalidArgument("multipliers must be Gaussians or zero".into())),
        }
    }

    fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    fn eval(&self, s: f64) -> Complex64 {
        self.f.exact_fourier(s).unwrap_or_default()
    }
}

struct Demo<'a> {
    setup: &'a NonPreservationSetup,
    rule: GaussLegendre,
    k1: Kernel,
    k2: Kernel,
    bump_norm: f64,
}

const PANELS: usize = 12;

impl<'a> Demo<'a> {
    fn bump(&self, y: f64) -> f64 {
        let w = self.setup.bump_width;
        if !(0.0..=w).contains(&y) {
            return 0.0;
        }
        let s = (PI * y / w).sin();
        self.bump_norm * s * s
    }

    fn integrate<F: FnMut(f64) -> Complex64 + Copy>(&self, a: f64, b: f64, f: F) -> Complex64 {
        if b <= a {
            return Complex64::default();
        }
        let h = (b - a) / PANELS as f64;
        (0..PANELS).map(|i| self.rule.integrate_complex(a + i as f64 * h, a + (i + 1) as f64 * h, f)).sum()
    }

    /// Part of the support of `ξ_n` mapped into `x ≥ 0`.
    fn projected_support(&self, n: usize) -> (f64, f64) {
        let lo = n as f64 * self.setup.spacing;
        let hi = lo + self.setup.bump_width;
        (lo.max(self.setup.u.eval(0.0)), hi)
    }

    /// `(f̂₁ * ξ_n)(y)`.
    fn translation_term(&self, n: usize, y: f64) -> Complex64 {
        let shift = n as f64 * self.setup.spacing;
        self.integrate(0.0, self.setup.bump_width, |z| self.k1.eval(y - shift - z) * self.bump(z))
    }

    /// `(f̂₂ * PUξ_n)(x)`, integrated in `y' = u(x')`.
    fn pulled_back(&self, n: usize, x: f64) -> Complex64 {
        let shift = n as f64 * self.setup.spacing;
        let u = self.setup.u;
        let (lo, hi) = self.projected_support(n);
        self.integrate(lo, hi, |y| self.k2.eval(x - u.inverse(y)) * (self.bump(y - shift) * u.inverse_derivative(y).sqrt()))
    }

    /// `η_n(x) = ∫ (PUξ_n)(x') e^{2πixx'} dx'`.
    fn eta(&self, n: usize, x: f64) -> Complex64 {
        let shift = n as f64 * self.setup.spacing;
        let u = self.setup.u;
        let (lo, hi) = self.projected_support(n);
        self.integrate(lo, hi, |y| {
            Complex64::from_polar(self.bump(y - shift) * u.inverse_derivative(y).sqrt(), 2.0 * PI * x * u.inverse(y))
        })
    }

    fn a(&self) -> f64 {
        let pad = self.k1.half_width;
        self.integrate(-pad, self.setup.bump_width + pad, |y| Complex64::new(self.translation_term(0, y).norm_sqr(), 0.0))
            .re
            .sqrt()
    }

    fn row(&self, n: usize, a: f64) -> DemoRow {
        if self.k2.is_zero() {
            return DemoRow { n, norm: a, translation_term: a, pulled_back_l2: 0.0, pulled_back_sup: 0.0 };
        }
        let u = self.setup.u;
        let (lo, hi) = self.projected_support(n);
        let (b2, sup) = if hi <= lo {
            (0.0, 0.0)
        } else {
            let pad = self.k2.half_width;
            let b2 = self
                .integrate(u.inverse(lo) - pad, u.inverse(hi) + pad, |x| Complex64::new(self.pulled_back(n, x).norm_sqr(), 0.0))
                .re;
            (b2, self.fourier_side_sup(n))
        };
        let shift = n as f64 * self.setup.spacing;
        let pad = self.k1.half_width;
        let cross = if self.k1.is_zero() {
            Complex64::default()
        } else {
            self.integrate(shift - pad, shift + self.setup.bump_width + pad, |y| {
                self.translation_term(n, y).conj() * self.pulled_back(n, u.inverse(y)) * u.inverse_derivative(y).sqrt()
            })
        };
        let norm = (a * a + b2 - 2.0 * cross.re).max(0.0).sqrt();
        DemoRow { n, norm, translation_term: a, pulled_back_l2: b2.sqrt(), pulled_back_sup: sup }
    }

    /// `‖UT₁ξ_n − T₂PUξ_n‖₂` integrated directly in `x`, without expanding
    /// the square.
    fn direct_norm(&self, n: usize) -> f64 {
        let u = self.setup.u;
        let shift = n as f64 * self.setup.spacing;
        let mut cuts = vec![];
        if !self.k1.is_zero() {
            let pad = self.k1.half_width;
            cuts.push(u.inverse(shift - pad));
            cuts.push(u.inverse(shift + self.setup.bump_width + pad));
        }
        let (lo, hi) = self.projected_support(n);
        if !self.k2.is_zero() && hi > lo {
            let pad = self.k2.half_width;
            cuts.push(u.inverse(lo) - pad);
            cuts.push(u.inverse(hi) + pad);
        }
        cuts.sort_by(f64::total_cmp);
        let integrand = |x: f64| {
            let y = u.eval(x);
            let left = if self.k1.is_zero() {
                Complex64::default()
            } else {
                self.translation_term(n, y) * u.derivative(x).sqrt()
            };
            let right = if self.k2.is_zero() { Complex64::default() } else { self.pulled_back(n, x) };
            Complex64::new((left - right).norm_sqr(), 0.0)
        };
        cuts.windows(2).map(|w| self.integrate(w[0], w[1], integrand).re).sum::<f64>().sqrt()
    }

    fn fourier_side_sup(&self, n: usize) -> f64 {
        let LineFunction::Gaussian { center, width, .. } = self.k2.f else {
            return 0.0;
        };
        let reach = self.setup.u.inverse(self.projected_support(n).1).abs().max(1.0);
        let half = 3.6 * width;
        let step = (width / 100.0).min(1.0 / (16.0 * reach));
        let count = (2.0 * half / step).ceil() as usize;
        (0..=count)
            .map(|i| {
                let x = center - half + i as f64 * step;
                (self.k2.f.eval(x) * self.eta(n, x)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Norms of `(T₁ − U⁻¹T₂U)ξ_n` for `n = 0..=n_max`.
pub fn nonpreservation_demo(setup: &NonPreservationSetup) -> Result<NonPreservationReport> {
    setup.u.check()?;
    if !(setup.bump_width > 0.0) || setup.spacing < setup.bump_width {
        return Err(Error::InvalidArgument("translates must have disjoint supports".into()));
    }
    let demo = Demo {
        setup,
        rule: GaussLegendre::new(16),
        k1: Kernel::new(&setup.f1)?,
        k2: Kernel::new(&setup.f2)?,
        bump_norm: (8.0 / (3.0 * setup.bump_width)).sqrt(),
    };
    let a = if demo.k1.is_zero() { 0.0 } else { demo.a() };
    let rows = (0..=setup.n_max).into_par_iter().map(|n| demo.row(n, a)).collect();
    Ok(NonPreservationReport { a, derivative_unbounded: setup.u.derivative_unbounded(), rows })
}

/// The norms of [`nonpreservation_demo`] for the listed `n`, computed by
/// direct quadrature of the difference.
pub fn direct_norms(setup: &NonPreservationSetup, ns: &[usize]) -> Result<Vec<f64>> {
    setup.u.check()?;
    let demo = Demo {
        setup,
        rule: GaussLegendre::new(16),
        k1: Kernel::new(&setup.f1)?,
        k2: Kernel::new(&setup.f2)?,
        bump_norm: (8.0 / (3.0 * setup.bump_width)).sqrt(),
    };
    Ok(ns.par_iter().map(|&n| demo.direct_norm(n)).collect())
}
