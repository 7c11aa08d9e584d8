//! Integrable functions on the line and their Fourier transforms
//! `f̂(s) = ∫ f(t) e^{−2πist} dt`.

use crate::error::{Error, Result};
use crate::interp::lagrange_weights;
use crate::quadrature::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative size below which a tail is dropped from the integration window.
const TAIL_CUTOFF: f64 = 1e-17;
/// Largest phase change `|2πs|·h/2` allowed on one Gauss-Legendre panel.
const MAX_PANEL_PHASE: f64 = 7.5;
const RULE_POINTS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineFunction {
    Zero,
    /// `amp·e^{−rate·t}` for `t ≥ 0`, zero for `t < 0`.
    OneSidedExp { amp: f64, rate: f64 },
    /// `amp·exp(−π((t − center)/width)²)`.
    Gaussian { amp: f64, center: f64, width: f64 },
    /// Samples at `start + i·step`, cubic between nodes and zero outside.
    Sampled { start: f64, step: f64, values: Vec<Complex64> },
}

impl LineFunction {
    /// `b(t) = e^{−t/2}` on `t ≥ 0`.
    pub fn wiener_hopf_generator() -> Self {
        LineFunction::OneSidedExp { amp: 1.0, rate: 0.5 }
    }

    pub fn gaussian(amp: f64, center: f64, width: f64) -> Self {
        LineFunction::Gaussian { amp, center, width }
    }

    pub fn sampled_from_fn<F: Fn(f64) -> Complex64>(start: f64, step: f64, count: usize, f: F) -> Self {
        LineFunction::Sampled { start, step, values: (0..count).map(|i| f(start + i as f64 * step)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LineFunction::Zero => true,
            LineFunction::OneSidedExp { amp, .. } | LineFunction::Gaussian { amp, .. } => *amp == 0.0,
            LineFunction::Sampled { values, .. } => values.iter().all(|v| *v == Complex64::new(0.0, 0.0)),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let re = match self {
            LineFunction::Zero => 0.0,
            LineFunction::OneSidedExp { amp, rate } => {
                if t >= 0.0 {
                    amp * (-rate * t).exp()
                } else {
                    0.0
                }
            }
            LineFunction::Gaussian { amp, center, width } => {
                let u = (t - center) / width;
                amp * (-PI * u * u).exp()
            }
            LineFunction::Sampled { start, step, values } => {
                let u = (t - start) / step;
                if u < 0.0 || u > (values.len() - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let (base, w) = lagrange_weights(u, 4);
                return w
                    .iter()
                    .enumerate()
                    .filter_map(|(l, wl)| {
                        let i = base + l as i64;
                        (i >= 0 && (i as usize) < values.len()).then(|| values[i as usize] * *wl)
                    })
                    .sum();
            }
        };
        Complex64::new(re, 0.0)
    }

    /// Intervals covering the effective support, split where the function is
    /// not smooth.
    fn pieces(&self) -> Result<Vec<(f64, f64)>> {
        let span = -TAIL_CUTOFF.ln();
        match self {
            LineFunction::Zero => Ok(vec![]),
            LineFunction::OneSidedExp { amp, rate } => {
                if *amp == 0.0 {
                    return Ok(vec![]);
                }
                if !(*rate > 0.0) {
                    return Err(Error::NonDecaying { at: f64::INFINITY, value: amp.abs() });
                }
                let end = span / rate;
                Ok((0..8).map(|i| (end * i as f64 / 8.0, end * (i + 1) as f64 / 8.0)).collect())
            }
            LineFunction::Gaussian { amp, center, width } => {
                if *amp == 0.0 {
                    return Ok(vec![]);
                }
                if !(*width > 0.0) {
                    return Err(Error::InvalidArgument(format!("Gaussian width {width} must be positive")));
                }
                let half = width * (span / PI).sqrt();
                let lo = center - half;
                let h = 2.0 * half / 8.0;
                Ok((0..8).map(|i| (lo + i as f64 * h, lo + (i + 1) as f64 * h)).collect())
            }
            LineFunction::Sampled { start, step, values } => {
                if !(*step > 0.0) || values.len() < 2 {
                    return Err(Error::InvalidArgument("sampled function needs a positive step and two samples".into()));
                }
                let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                let n = values.len();
                for (i, v) in [(0, values[0]), (n - 1, values[n - 1])] {
                    if v.norm() > 1e-10 * peak {
                        return Err(Error::NonDecaying { at: start + i as f64 * step, value: v.norm() });
                    }
                }
                Ok((0..n - 1).map(|i| (start + i as f64 * step, start + (i + 1) as f64 * step)).collect())
            }
        }
    }

    /// `f̂(s)` by Gauss-Legendre panels short enough to resolve `e^{−2πist}`.
    pub fn fourier(&self, s: f64) -> Result<Complex64> {
        let pieces = self.pieces()?;
        let rule = GaussLegendre::new(RULE_POINTS);
        Ok(fourier_on_pieces(self, &pieces, &rule, s))
    }

    /// Closed forms where one exists.
    pub fn exact_fourier(&self, s: f64) -> Option<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        match self {
            LineFunction::Zero => Some(Complex64::new(0.0, 0.0)),
            LineFunction::OneSidedExp { amp, rate } if *rate > 0.0 => Some(*amp / (*rate + 2.0 * PI * i * s)),
            LineFunction::Gaussian { amp, center, width } => {
                Some((-2.0 * PI * i * s * center).exp() * amp * width * (-PI * width * width * s * s).exp())
            }
            _ => None,
        }
    }
}

fn fourier_on_pieces(f: &LineFunction, pieces: &[(f64, f64)], rule: &GaussLegendre, s: f64) -> Complex64 {
    let kappa = -2.0 * PI * s;
    pieces
        .iter()
        .map(|&(a, b)| {
            let panels = ((kappa.abs() * (b - a) / (2.0 * MAX_PANEL_PHASE)).ceil() as usize).max(1);
            let h = (b - a) / panels as f64;
            (0..panels)
                .map(|p| {
                    let lo = a + p as f64 * h;
                    rule.integrate_complex(lo, lo + h, |t| f.eval(t) * Complex64::from_polar(1.0, kappa * t))
                })
                .sum::<Complex64>()
        })
        .sum()
}

/// `f̂` on a grid of frequencies.
pub fn fourier_transform_line(f: &LineFunction, s: &[f64]) -> Result<Vec<Complex64>> {
    let pieces = f.pieces()?;
    let rule = GaussLegendre::new(RULE_POINTS);
    Ok(s.par_iter().map(|&s| fourier_on_pieces(f, &pieces, &rule, s)).collect())
}
