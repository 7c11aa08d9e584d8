//! Closed symbol loops and their winding numbers.
//!
//! A line symbol is sampled at `s_j = tan(θ_j/2)/π` for `N` equally spaced
//! angles `θ_j` in `(−π, π)`, so the loop closes uniformly through its value
//! at infinity.

use super::line::{fourier_transform_line, LineFunction};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Moduli at or below this count as zeros of the symbol.
pub const FREDHOLM_FLOOR: f64 = 1e-12;
pub const DEFAULT_MAX_RESIDUAL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoopDomain {
    /// Samples at `e^{2πij/N}`.
    Circle,
    /// Samples at [`line_nodes`], closed through `limit`.
    Line { limit: Complex64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolLoop {
    label: String,
    domain: LoopDomain,
    values: Vec<Complex64>,
}

pub fn line_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let theta = -PI + 2.0 * PI * (j as f64 + 0.5) / n as f64;
            (0.5 * theta).tan() / PI
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub winding: i64,
    /// Total argument increment over `2π`.
    pub turns: f64,
    /// `|turns − winding|` plus the change when every other sample is dropped.
    pub residual: f64,
    pub min_modulus: f64,
}

impl SymbolLoop {
    pub fn circle(values: Vec<Complex64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidArgument("a loop needs at least three samples".into()));
        }
        Ok(SymbolLoop { label: "symbol".into(), domain: LoopDomain::Circle, values })
    }

    pub fn circle_from_fn<F: Fn(Complex64) -> Complex64>(n: usize, f: F) -> Result<Self> {
        Self::circle((0..n).map(|j| f(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))).collect())
    }

    /// Samples on [`line_nodes`] with limits at `−∞` and `+∞` that must agree
    /// within `tol`.
    pub fn line(values: Vec<Complex64>, limits: (Complex64, Complex64), tol: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidArgument("a loop needs at least three samples".into()));
        }
        if (limits.0 - limits.1).norm() > tol {
            return Err(Error::InvalidArgument(format!(
                "loop does not close: limits {} and {} at ∓∞",
                limits.0, limits.1
            )));
        }
        let limit = 0.5 * (limits.0 + limits.1);
        Ok(SymbolLoop { label: "symbol".into(), domain: LoopDomain::Line { limit }, values })
    }

    pub fn line_from_fn<F: Fn(f64) -> Complex64>(
        n: usize,
        f: F,
        limits: (Complex64, Complex64),
        tol: f64,
    ) -> Result<Self> {
        Self::line(line_nodes(n).into_iter().map(f).collect(), limits, tol)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> LoopDomain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The closed sequence of points, including the point at infinity of a
    /// line symbol.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = self.values.clone();
        if let LoopDomain::Line { limit } = self.domain {
            pts.push(limit);
        }
        pts
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        let domain = match self.domain {
            LoopDomain::Circle => LoopDomain::Circle,
            LoopDomain::Line { limit } => LoopDomain::Line { limit: f(limit) },
        };
        SymbolLoop { label: self.label.clone(), domain, values: self.values.iter().map(|&z| f(z)).collect() }
    }

    /// Pointwise product of two loops sampled the same way.
    pub fn mul(&self, other: &SymbolLoop) -> Result<Self> {
        let domain = match (self.domain, other.domain) {
            (LoopDomain::Circle, LoopDomain::Circle) => LoopDomain::Circle,
            (LoopDomain::Line { limit: a }, LoopDomain::Line { limit: b }) => LoopDomain::Line { limit: a * b },
            _ => return Err(Error::InvalidArgument("cannot multiply a circle loop by a line loop".into())),
        };
        if self.len() != other.len() {
            return Err(Error::InvalidArgument(format!("loops have {} and {} samples", self.len(), other.len())));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(SymbolLoop { label: format!("{}·{}", self.label, other.label), domain, values })
    }

    pub fn min_modulus(&self) -> f64 {
        self.points().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Winding number about the origin by summing argument increments.
    pub fn winding_number(&self, max_residual: f64) -> Result<Winding> {
        let min_modulus = self.min_modulus();
        if !(min_modulus > FREDHOLM_FLOOR) {
            return Err(Error::NonFredholm { min_modulus });
        }
        let pts = self.points();
        let turns = total_turns(pts.iter().copied());
        let coarse = total_turns(pts.iter().copied().step_by(2));
        let winding = turns.round();
        let residual = (turns - winding).abs() + (coarse - turns).abs();
        if residual > max_residual {
            return Err(Error::UnderResolved { residual });
        }
        Ok(Winding { winding: winding as i64, turns, residual, min_modulus })
    }
}

fn total_turns<I: Iterator<Item = Complex64>>(pts: I) -> f64 {
    let pts: Vec<Complex64> = pts.collect();
    let n = pts.len();
    (0..n).map(|j| (pts[(j + 1) % n] / pts[j]).arg()).sum::<f64>() / (2.0 * PI)
}

/// The circle-side symbol of `λ(g)` compressed to the positive half-line.
///
/// Increasing `t` runs counterclockwise under the Cayley transform, and a
/// function `h` on the Cayley side corresponds to `g` with `ĝ(t) = h(−t)`, so
/// the loop is `t ↦ ĝ(−t)` with value `0` at infinity.
pub fn cayley_side_symbol(g: &LineFunction, n: usize) -> Result<SymbolLoop> {
    let s: Vec<f64> = line_nodes(n).into_iter().map(|t| -t).collect();
    let values = fourier_transform_line(g, &s)?;
    let zero = Complex64::new(0.0, 0.0);
    SymbolLoop::line(values, (zero, zero), 0.0)
}

/// The loop of `1 − b̂` for the generator `b(t) = e^{−t/2}·1_{t ≥ 0}`.
pub fn generator_loop(n: usize) -> Result<SymbolLoop> {
    let one = Complex64::new(1.0, 0.0);
    Ok(cayley_side_symbol(&LineFunction::wiener_hopf_generator(), n)?.map(|z| one - z).with_label("1 - b"))
}

/// Index data for one symbol. The boundary index is minus the winding number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub symbol_id: String,
    pub winding: i64,
    pub boundary_index: i64,
    pub fredholm_min_modulus: f64,
    pub residual: f64,
}

pub fn index_report(symbol: &SymbolLoop, max_residual: f64) -> Result<IndexReport> {
    let w = symbol.winding_number(max_residual)?;
    Ok(IndexReport {
        symbol_id: symbol.label().to_string(),
        winding: w.winding,
        boundary_index: -w.winding,
        fredholm_min_modulus: w.min_modulus,
        residual: w.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn powers_of_z() {
        for n in -2..=2i32 {
            let l = SymbolLoop::circle_from_fn(64, |z| z.powi(n)).unwrap();
            assert_eq!(l.winding_number(0.05).unwrap().winding, n as i64);
        }
        let constant = SymbolLoop::circle_from_fn(16, |_| c(2.0, -1.0)).unwrap();
        assert_eq!(constant.winding_number(0.05).unwrap().winding, 0);
    }

    #[test]
    fn generator_has_winding_one() {
        let r = index_report(&generator_loop(512).unwrap(), 0.05).unwrap();
        assert_eq!((r.winding, r.boundary_index), (1, -1));
        assert!(r.residual < 1e-9);
        assert!((r.fredholm_min_modulus - 1.0).abs() < 1e-6);
    }

    #[test]
    fn increasing_frequency_traverses_the_other_way() {
        let one = c(1.0, 0.0);
        let l = SymbolLoop::line_from_fn(512, |s| c(-0.5, 2.0 * PI * s) / c(0.5, 2.0 * PI * s), (one, one), 0.0)
            .unwrap();
        assert_eq!(l.winding_number(0.05).unwrap().winding, -1);
    }

    #[test]
    fn failures() {
        let vanishing = SymbolLoop::circle_from_fn(32, |z| c(1.0, 0.0) - z).unwrap();
        assert!(matches!(vanishing.winding_number(0.05), Err(Error::NonFredholm { .. })));
        let coarse = SymbolLoop::circle_from_fn(8, |z| z.powi(3)).unwrap();
        assert!(matches!(coarse.winding_number(0.05), Err(Error::UnderResolved { .. })));
        let one = c(1.0, 0.0);
        assert!(SymbolLoop::line_from_fn(16, |_| one, (one, -one), 1e-9).is_err());
    }
}
