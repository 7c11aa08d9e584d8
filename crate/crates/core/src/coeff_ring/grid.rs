//! Sampled coefficient functions on a uniform grid in `t`.

use crate::error::{Error, Result};
use crate::interp::lagrange_weights;
use crate::poly::Poly;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

use super::Tolerances;

/// Magic bytes at the head of the binary record.
pub const GRID_MAGIC: &[u8; 4] = b"GFN1";

/// Relative slack allowed when deciding that two grids share their nodes.
const ALIGN_TOL: f64 = 1e-9;

/// Interpolation order used by [`GridFn::resample`].
const RESAMPLE_POINTS: usize = 6;

/// How [`GridFn::convolve_with`] evaluates the discrete convolution sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionMethod {
    Direct,
    Fft,
    /// FFT once the product of lengths exceeds a fixed threshold.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFn {
    t_start: f64,
    t_step: f64,
    samples: Vec<Complex64>,
}

impl GridFn {
    /// Validates positivity of the step, non-emptiness and that both window
    /// endpoints are below the default support tolerance.
    pub fn new(t_start: f64, t_step: f64, samples: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(t_start, t_step, samples, Tolerances::default().support)
    }

    pub fn with_tolerance(
        t_start: f64,
        t_step: f64,
        samples: Vec<Complex64>,
        support_tol: f64,
    ) -> Result<Self> {
        if !(t_step > 0.0) || !t_step.is_finite() || !t_start.is_finite() {
            return Err(Error::InvalidArgument(format!("grid step must be positive, got {t_step}")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidArgument("grid function needs at least one sample".into()));
        }
        let first = samples[0].norm();
        let last = samples[samples.len() - 1].norm();
        if first > support_tol || last > support_tol {
            return Err(Error::SupportLeak(format!(
                "window endpoints carry |f| = {first:e}, {last:e} above tolerance {support_tol:e}"
            )));
        }
        Ok(GridFn { t_start, t_step, samples })
    }

    /// Builds a grid function without the support check; used for results of
    /// operations whose inputs were already validated.
    pub(crate) fn from_parts(t_start: f64, t_step: f64, samples: Vec<Complex64>) -> Self {
        debug_assert!(t_step > 0.0 && !samples.is_empty());
        GridFn { t_start, t_step, samples }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(t_start: f64, t_step: f64, count: usize, f: F) -> Result<Self> {
        let samples = (0..count).map(|i| f(t_start + i as f64 * t_step)).collect();
        GridFn::new(t_start, t_step, samples)
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(t_start: f64, t_step: f64, count: usize, f: F) -> Result<Self> {
        Self::from_fn(t_start, t_step, count, |t| Complex64::new(f(t), 0.0))
    }

    /// All-zero function on the same grid.
    pub fn zeros_like(&self) -> Self {
        GridFn::from_parts(self.t_start, self.t_step, vec![Complex64::new(0.0, 0.0); self.len()])
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_step(&self) -> f64 {
        self.t_step
    }

    pub fn t_end(&self) -> f64 {
        self.t_at(self.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn t_at(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.t_step
    }

    fn check_step(&self, other: &GridFn) -> Result<()> {
        if (self.t_step - other.t_step).abs() > ALIGN_TOL * self.t_step {
            return Err(Error::RepresentationMismatch(format!(
                "grid steps differ: {} vs {}",
                self.t_step, other.t_step
            )));
        }
        Ok(())
    }

    /// Index offset of `other`'s first node on this grid, if the nodes coincide.
    fn node_offset(&self, other: &GridFn) -> Result<i64> {
        self.check_step(other)?;
        let shift = (other.t_start - self.t_start) / self.t_step;
        let k = shift.round();
        if (shift - k).abs() > 1e-6 {
            return Err(Error::RepresentationMismatch(format!(
                "grid origins {} and {} are not commensurate with step {}",
                self.t_start, other.t_start, self.t_step
            )));
        }
        Ok(k as i64)
    }

    fn combine(&self, other: &GridFn, sign: f64) -> Result<GridFn> {
        let off = self.node_offset(other)?;
        let lo = 0.min(off);
        let hi = (self.len() as i64).max(off + other.len() as i64);
        let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize];
        for (i, v) in self.samples.iter().enumerate() {
            out[(i as i64 - lo) as usize] += v;
        }
        for (i, v) in other.samples.iter().enumerate() {
            out[(i as i64 + off - lo) as usize] += v * sign;
        }
        Ok(GridFn::from_parts(self.t_start + lo as f64 * self.t_step, self.t_step, out))
    }

    pub fn add(&self, other: &GridFn) -> Result<GridFn> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &GridFn) -> Result<GridFn> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, c: f64) -> GridFn {
        self.map(|_, v| v * c)
    }

    fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> GridFn {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, v)| f(self.t_at(i), *v))
            .collect();
        GridFn::from_parts(self.t_start, self.t_step, samples)
    }

    pub fn mul_by_t(&self) -> GridFn {
        self.map(|t, v| v * t)
    }

    pub fn mul_by_exp(&self, c: f64) -> GridFn {
        if c == 0.0 {
            return self.clone();
        }
        self.map(|t, v| v * (c * t).exp())
    }

    pub fn mul_by_poly(&self, p: &Poly) -> GridFn {
        self.map(|t, v| v * p.eval(t))
    }

    pub fn convolve(&self, other: &GridFn) -> Result<GridFn> {
        self.convolve_with(other, ConvolutionMethod::Auto)
    }

    /// `(f * g)(t) = ∫ f(t - s) g(s) ds` by the trapezoid rule on the common step.
    ///
    /// Both inputs vanish at their window ends, so the trapezoid weights reduce
    /// to the plain Riemann sum and the discrete convolution is exact for it.
    pub fn convolve_with(&self, other: &GridFn, method: ConvolutionMethod) -> Result<GridFn> {
        self.check_step(other)?;
        let h = self.t_step;
        let n = self.len() + other.len() - 1;
        let use_fft = match method {
            ConvolutionMethod::Direct => false,
            ConvolutionMethod::Fft => true,
            ConvolutionMethod::Auto => self.len() * other.len() > 64 * 64,
        };
        let mut out = if use_fft {
            fft_convolve(&self.samples, &other.samples)
        } else {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (i, a) in self.samples.iter().enumerate() {
                for (j, b) in other.samples.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            out
        };
        for v in &mut out {
            *v *= h;
        }
        Ok(GridFn::from_parts(self.t_start + other.t_start, h, out))
    }

    /// Value at an arbitrary `t` by local Lagrange interpolation, zero outside the window.
    pub fn eval(&self, t: f64) -> Complex64 {
        let u = (t - self.t_start) / self.t_step;
        if u < -1e-12 || u > (self.len() - 1) as f64 + 1e-12 {
            return Complex64::new(0.0, 0.0);
        }
        let (base, w) = lagrange_weights(u, RESAMPLE_POINTS);
        w.iter()
            .enumerate()
            .filter_map(|(k, wk)| {
                let idx = base + k as i64;
                (idx >= 0 && (idx as usize) < self.len()).then(|| self.samples[idx as usize] * *wk)
            })
            .sum()
    }

    pub fn resample(&self, t_start: f64, t_step: f64, count: usize) -> GridFn {
        let samples = (0..count).map(|i| self.eval(t_start + i as f64 * t_step)).collect();
        GridFn::from_parts(t_start, t_step, samples)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn l1_norm(&self) -> f64 {
        trapezoid(self.samples.iter().map(|v| v.norm()), self.t_step)
    }

    pub fn l2_norm(&self) -> f64 {
        trapezoid(self.samples.iter().map(|v| v.norm_sqr()), self.t_step).sqrt()
    }

    /// Sup-norm distance, on the union window at the finer of the two steps.
    pub fn distance(&self, other: &GridFn) -> f64 {
        if let Ok(diff) = self.sub(other) {
            return diff.sup_norm();
        }
        let step = self.t_step.min(other.t_step);
        let lo = self.t_start.min(other.t_start);
        let hi = self.t_end().max(other.t_end());
        let count = ((hi - lo) / step).ceil() as usize + 1;
        let a = self.resample(lo, step, count);
        let b = other.resample(lo, step, count);
        a.samples
            .iter()
            .zip(&b.samples)
            .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    /// `‖f - g‖∞ ≤ tol · max(‖f‖∞, ‖g‖∞)`.
    pub fn approx_eq(&self, other: &GridFn, tol: f64) -> bool {
        let scale = self.sup_norm().max(other.sup_norm());
        self.distance(other) <= tol * scale
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "re", "im"])?;
        for (i, v) in self.samples.iter().enumerate() {
            wr.write_record(&[
                format!("{:.17e}", self.t_at(i)),
                format!("{:.17e}", v.re),
                format!("{:.17e}", v.im),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Little-endian record: magic, `t_start`, `t_step`, `count` (u64), then
    /// interleaved real and imaginary parts.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(GRID_MAGIC)?;
        w.write_f64::<LittleEndian>(self.t_start)?;
        w.write_f64::<LittleEndian>(self.t_step)?;
        w.write_u64::<LittleEndian>(self.samples.len() as u64)?;
        write_complex_payload(&mut w, &self.samples)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<GridFn> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != GRID_MAGIC {
            return Err(Error::Format("not a grid function record".into()));
        }
        let t_start = r.read_f64::<LittleEndian>()?;
        let t_step = r.read_f64::<LittleEndian>()?;
        let count = r.read_u64::<LittleEndian>()? as usize;
        let samples = read_complex_payload(&mut r, count)?;
        if !(t_step > 0.0) || samples.is_empty() {
            return Err(Error::Format("grid record has a non-positive step or no samples".into()));
        }
        Ok(GridFn::from_parts(t_start, t_step, samples))
    }
}

fn trapezoid<I: Iterator<Item = f64>>(values: I, h: f64) -> f64 {
    let v: Vec<f64> = values.collect();
    match v.len() {
        0 => 0.0,
        1 => 0.0,
        n => h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1])),
    }
}

pub(crate) fn write_complex_payload<W: Write>(w: &mut W, data: &[Complex64]) -> Result<()> {
    for v in data {
        w.write_f64::<LittleEndian>(v.re)?;
        w.write_f64::<LittleEndian>(v.im)?;
    }
    Ok(())
}

pub(crate) fn read_complex_payload<R: Read>(r: &mut R, count: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let re = r.read_f64::<LittleEndian>()?;
        let im = r.read_f64::<LittleEndian>()?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

fn fft_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() + b.len() - 1;
    let size = n.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let norm = 1.0 / size as f64;
    fa.truncate(n);
    fa.iter().map(|v| v * norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(step: f64, radius: f64) -> GridFn {
        let n = (2.0 * radius / step).round() as usize + 1;
        GridFn::from_real_fn(-radius, step, n, |t| (-t * t / 2.0).exp()).unwrap()
    }

    #[test]
    fn gaussian_convolution_matches_closed_form() {
        let f = gaussian(0.01, 10.0);
        let h = f.convolve(&f).unwrap();
        let err = h
            .samples()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let t = h.t_at(i);
                (v.re - PI.sqrt() * (-t * t / 4.0).exp()).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn fft_and_direct_agree() {
        let f = gaussian(0.05, 8.0);
        let g = GridFn::from_real_fn(-6.0, 0.05, 241, |t| t * (-t * t).exp()).unwrap();
        let a = f.convolve_with(&g, ConvolutionMethod::Direct).unwrap();
        let b = f.convolve_with(&g, ConvolutionMethod::Fft).unwrap();
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn zero_annihilates() {
        let f = gaussian(0.05, 8.0);
        let z = f.zeros_like();
        assert_eq!(f.convolve(&z).unwrap().sup_norm(), 0.0);
        assert_eq!(z.l1_norm(), 0.0);
    }

    #[test]
    fn mismatched_steps_are_rejected() {
        let f = gaussian(0.05, 8.0);
        let g = gaussian(0.1, 8.0);
        assert!(matches!(f.convolve(&g), Err(Error::RepresentationMismatch(_))));
        assert!(f.add(&g).is_err());
    }

    #[test]
    fn support_check() {
        assert!(GridFn::from_real_fn(-1.0, 0.1, 21, |t| (-t * t).exp()).is_err());
        assert!(GridFn::new(0.0, 0.0, vec![Complex64::new(0.0, 0.0)]).is_err());
        assert!(GridFn::new(0.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn norms_and_tolerance_semantics() {
        let f = gaussian(0.01, 10.0);
        assert!((f.sup_norm() - 1.0).abs() < 1e-15);
        assert!((f.l1_norm() - (2.0 * PI).sqrt()).abs() < 1e-10);
        let g = GridFn::from_real_fn(-10.0, 0.01, 2001, |t| (-(t - 1.0).powi(2)).exp()).unwrap();
        let perturbed = f.add(&g.scale(1e-12)).unwrap();
        assert!(f.approx_eq(&perturbed, 1e-9));
        assert!(!f.approx_eq(&g, 1e-9));
    }

    #[test]
    fn misaligned_grids_compare_by_resampling() {
        let f = gaussian(0.01, 10.0);
        let g = GridFn::from_real_fn(-9.995, 0.01, 2000, |t| (-t * t / 2.0).exp()).unwrap();
        assert!(f.sub(&g).is_err());
        assert!(f.approx_eq(&g, 1e-8));
    }

    #[test]
    fn binary_and_csv_round_trip() {
        let f = GridFn::from_fn(-5.5, 0.25, 45, |t| Complex64::new((-t * t).exp(), 0.1 * t * (-t * t).exp()))
            .unwrap();
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 24 + 45 * 16);
        assert_eq!(GridFn::read_binary(buf.as_slice()).unwrap(), f);
        let mut csv_buf = Vec::new();
        f.write_csv(&mut csv_buf).unwrap();
        let text = String::from_utf8(csv_buf).unwrap();
        assert!(text.starts_with("t,re,im\n"));
        assert_eq!(text.lines().count(), 46);
    }
}
