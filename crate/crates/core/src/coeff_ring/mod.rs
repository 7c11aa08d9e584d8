//! The coefficient ring `C_c^∞(R)` under convolution.
//!
//! Two representations implement [`CoefficientRing`]: [`GridFn`] samples a
//! function on a uniform grid, [`GaussPolyFn`] keeps an exact sum of
//! polynomial-times-Gaussian atoms. Gaussians are not compactly supported; they
//! count as effectively compact once they fall below the support tolerance.

mod gauss_poly;
mod grid;

pub use gauss_poly::{GaussAtom, GaussPolyFn};
pub use grid::{ConvolutionMethod, GridFn, GRID_MAGIC};
pub(crate) use grid::{read_complex_payload, write_complex_payload};

use crate::error::{Error, Result};
use crate::poly::Poly;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest admissible `|f|` at the edge of a sampling window.
    pub support: f64,
    /// Relative sup-norm tolerance for equality checks.
    pub equality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { support: 1e-10, equality: 1e-8 }
    }
}

/// Operations the jet product needs from its coefficients.
pub trait CoefficientRing: Clone + std::fmt::Debug {
    /// Name of the representation; values of different kinds do not mix.
    fn kind(&self) -> &'static str;
    /// Additive identity compatible with `self` (same grid, for sampled values).
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: f64) -> Self;
    fn convolve(&self, other: &Self) -> Result<Self>;
    /// Pointwise `poly(t) e^{rate t} f(t)`.
    fn mul_by_poly_exp(&self, poly: &Poly, rate: f64) -> Self;
    fn mul_by_t(&self) -> Self {
        self.mul_by_poly_exp(&Poly::monomial(1, 1.0), 0.0)
    }
    fn mul_by_exp(&self, rate: f64) -> Self {
        self.mul_by_poly_exp(&Poly::one(), rate)
    }
    fn sup_norm(&self) -> f64;
}

impl CoefficientRing for GaussPolyFn {
    fn kind(&self) -> &'static str {
        "gauss_poly"
    }
    fn zero_like(&self) -> Self {
        GaussPolyFn::zero()
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(GaussPolyFn::add(self, other))
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(GaussPolyFn::sub(self, other))
    }
    fn scale(&self, c: f64) -> Self {
        GaussPolyFn::scale(self, c)
    }
    fn convolve(&self, other: &Self) -> Result<Self> {
        Ok(GaussPolyFn::convolve(self, other))
    }
    fn mul_by_poly_exp(&self, poly: &Poly, rate: f64) -> Self {
        self.mul_by_poly(poly).mul_by_exp(rate)
    }
    fn sup_norm(&self) -> f64 {
        GaussPolyFn::sup_norm(self)
    }
}

impl CoefficientRing for GridFn {
    fn kind(&self) -> &'static str {
        "grid"
    }
    fn zero_like(&self) -> Self {
        self.zeros_like()
    }
    fn add(&self, other: &Self) -> Result<Self> {
        GridFn::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        GridFn::sub(self, other)
    }
    fn scale(&self, c: f64) -> Self {
        GridFn::scale(self, c)
    }
    fn convolve(&self, other: &Self) -> Result<Self> {
        GridFn::convolve(self, other)
    }
    fn mul_by_poly_exp(&self, poly: &Poly, rate: f64) -> Self {
        self.mul_by_poly(poly).mul_by_exp(rate)
    }
    fn sup_norm(&self) -> f64 {
        GridFn::sup_norm(self)
    }
}

/// Either representation, chosen at run time; mixing them is an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientFunction {
    Grid(GridFn),
    GaussPoly(GaussPolyFn),
}

impl CoefficientFunction {
    fn mismatch(&self, other: &Self) -> Error {
        Error::RepresentationMismatch(format!(
            "cannot combine {} with {}",
            self.kind_name(),
            other.kind_name()
        ))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CoefficientFunction::Grid(_) => "grid",
            CoefficientFunction::GaussPoly(_) => "gauss_poly",
        }
    }

    pub fn l1_norm(&self) -> f64 {
        match self {
            CoefficientFunction::Grid(f) => f.l1_norm(),
            CoefficientFunction::GaussPoly(f) => f.l1_norm(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        match self {
            CoefficientFunction::Grid(f) => f.l2_norm(),
            CoefficientFunction::GaussPoly(f) => f.l2_norm(),
        }
    }

    /// Relative sup-norm comparison. Mixed representations are compared by
    /// sampling the exact side on the grid of the sampled side.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        use CoefficientFunction::*;
        match (self, other) {
            (Grid(a), Grid(b)) => a.approx_eq(b, tol),
            (GaussPoly(a), GaussPoly(b)) => {
                let scale = a.sup_norm().max(b.sup_norm());
                a.sub(b).sup_norm() <= tol * scale
            }
            (Grid(g), GaussPoly(e)) | (GaussPoly(e), Grid(g)) => {
                let sampled = GridFn::from_parts(
                    g.t_start(),
                    g.t_step(),
                    e.sample(g.t_start(), g.t_step(), g.len())
                        .into_iter()
                        .map(|v| num_complex::Complex64::new(v, 0.0))
                        .collect(),
                );
                g.approx_eq(&sampled, tol)
            }
        }
    }
}

impl CoefficientRing for CoefficientFunction {
    fn kind(&self) -> &'static str {
        self.kind_name()
    }
    fn zero_like(&self) -> Self {
        match self {
            CoefficientFunction::Grid(f) => CoefficientFunction::Grid(f.zeros_like()),
            CoefficientFunction::GaussPoly(_) => CoefficientFunction::GaussPoly(GaussPolyFn::zero()),
        }
    }
    fn add(&self, other: &Self) -> Result<Self> {
        use CoefficientFunction::*;
        match (self, other) {
            (Grid(a), Grid(b)) => Ok(Grid(a.add(b)?)),
            (GaussPoly(a), GaussPoly(b)) => Ok(GaussPoly(a.add(b))),
            _ => Err(self.mismatch(other)),
        }
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        use CoefficientFunction::*;
        match (self, other) {
            (Grid(a), Grid(b)) => Ok(Grid(a.sub(b)?)),
            (GaussPoly(a), GaussPoly(b)) => Ok(GaussPoly(a.sub(b))),
            _ => Err(self.mismatch(other)),
        }
    }
    fn scale(&self, c: f64) -> Self {
        match self {
            CoefficientFunction::Grid(f) => CoefficientFunction::Grid(f.scale(c)),
            CoefficientFunction::GaussPoly(f) => CoefficientFunction::GaussPoly(f.scale(c)),
        }
    }
    fn convolve(&self, other: &Self) -> Result<Self> {
        use CoefficientFunction::*;
        match (self, other) {
            (Grid(a), Grid(b)) => Ok(Grid(a.convolve(b)?)),
            (GaussPoly(a), GaussPoly(b)) => Ok(GaussPoly(a.convolve(b))),
            _ => Err(self.mismatch(other)),
        }
    }
    fn mul_by_poly_exp(&self, poly: &Poly, rate: f64) -> Self {
        match self {
            CoefficientFunction::Grid(f) => CoefficientFunction::Grid(f.mul_by_poly_exp(poly, rate)),
            CoefficientFunction::GaussPoly(f) => {
                CoefficientFunction::GaussPoly(CoefficientRing::mul_by_poly_exp(f, poly, rate))
            }
        }
    }
    fn sup_norm(&self) -> f64 {
        match self {
            CoefficientFunction::Grid(f) => f.sup_norm(),
            CoefficientFunction::GaussPoly(f) => f.sup_norm(),
        }
    }
}
