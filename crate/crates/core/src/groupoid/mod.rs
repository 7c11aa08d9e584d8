//! Sampled kernels on the transformation groupoid `R ⋊_φ R`.
//!
//! A kernel `f(x,t)` is stored on a uniform `x` grid and a `t` grid whose
//! nodes are integer multiples of the step, so `t − s` and `−t` of grid times
//! are again grid times. Only values at flowed points `φ_s(x)` need
//! interpolation, which is done in `x` with a local Lagrange stencil of six
//! nodes by default.

mod base_fn;
mod io;

pub use base_fn::BaseFn;
pub use io::KERNEL_MAGIC;

use crate::coeff_ring::{GridFn, Tolerances};
use crate::error::{Error, Result};
use crate::flow::{FlowModel, FlowVariant};
use crate::interp::lagrange_weights;
use crate::jet::Jet;
use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Stencil size used unless [`GroupoidKernel::with_interpolation`] says otherwise.
pub const DEFAULT_INTERP_POINTS: usize = 6;

const ALIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl XGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || count < 2 {
            return Err(Error::InvalidArgument(format!("bad x grid ({start}, {step}, {count})")));
        }
        Ok(XGrid { start, step, count })
    }

    /// Nodes `−radius, …, radius`.
    pub fn symmetric(radius: f64, step: f64) -> Result<Self> {
        let half = (radius / step).round() as usize;
        Self::new(-(half as f64) * step, step, 2 * half + 1)
    }

    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.count - 1)
    }

    fn same_as(&self, other: &XGrid) -> bool {
        self.count == other.count
            && (self.step - other.step).abs() <= ALIGN_TOL * self.step
            && (self.start - other.start).abs() <= ALIGN_TOL * self.step
    }
}

/// Times `(first + j)·step` for `j < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    step: f64,
    first: i64,
    count: usize,
}

impl TGrid {
    /// `start` must be an integer multiple of `step`.
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || count == 0 {
            return Err(Error::InvalidArgument(format!("bad t grid ({start}, {step}, {count})")));
        }
        let first = (start / step).round();
        if (start / step - first).abs() > ALIGN_TOL {
            return Err(Error::GridMismatch(format!("t window start {start} is not a multiple of the step {step}")));
        }
        Ok(TGrid { step, first: first as i64, count })
    }

    pub fn symmetric(radius: f64, step: f64) -> Result<Self> {
        let half = (radius / step).round() as i64;
        Ok(TGrid::from_indices(step, -half, (2 * half + 1) as usize))
    }

    pub fn from_indices(step: f64, first: i64, count: usize) -> Self {
        TGrid { step, first, count }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn first(&self) -> i64 {
        self.first
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn start(&self) -> f64 {
        self.first as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.count - 1)
    }

    pub fn at(&self, j: usize) -> f64 {
        (self.first + j as i64) as f64 * self.step
    }

    fn times(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.at(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidKernel {
    flow: FlowModel,
    x: XGrid,
    t: TGrid,
    /// Indexed `(x, t)`.
    samples: Array2<Complex64>,
    interp_points: usize,
}

impl GroupoidKernel {
    /// Checks the shape, that the samples vanish on the boundary of the window
    /// and that no sample above the support tolerance lies outside the flow
    /// domain.
    pub fn new(flow: FlowModel, x: XGrid, t: TGrid, samples: Array2<Complex64>) -> Result<Self> {
        Self::with_tolerance(flow, x, t, samples, Tolerances::default().support)
    }

    pub fn with_tolerance(
        flow: FlowModel,
        x: XGrid,
        t: TGrid,
        samples: Array2<Complex64>,
        support_tol: f64,
    ) -> Result<Self> {
        if samples.dim() != (x.count, t.count) {
            return Err(Error::GridMismatch(format!(
                "samples have shape {:?}, grids need ({}, {})",
                samples.dim(),
                x.count,
                t.count
            )));
        }
        let (nx, nt) = samples.dim();
        let mut edge = 0.0f64;
        for i in 0..nx {
            edge = edge.max(samples[[i, 0]].norm()).max(samples[[i, nt - 1]].norm());
        }
        for j in 0..nt {
            edge = edge.max(samples[[0, j]].norm()).max(samples[[nx - 1, j]].norm());
        }
        if edge > support_tol {
            return Err(Error::SupportLeak(format!(
                "kernel reaches |f| = {edge:e} on the window boundary (tolerance {support_tol:e})"
            )));
        }
        for ((i, j), v) in samples.indexed_iter() {
            if v.norm() > support_tol && !flow.in_domain(t.at(j), x.at(i)) {
                return Err(Error::OutOfDomain { x: x.at(i), t: t.at(j) });
            }
        }
        Ok(GroupoidKernel { flow, x, t, samples, interp_points: DEFAULT_INTERP_POINTS })
    }

    pub(crate) fn from_parts(flow: FlowModel, x: XGrid, t: TGrid, samples: Array2<Complex64>, points: usize) -> Self {
        debug_assert_eq!(samples.dim(), (x.count, t.count));
        GroupoidKernel { flow, x, t, samples, interp_points: points }
    }

    /// Samples `f` at every admissible node; nodes outside the flow domain get 0.
    pub fn from_fn<F>(flow: FlowModel, x: XGrid, t: TGrid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let samples = Array2::from_shape_fn((x.count, t.count), |(i, j)| {
            let (xi, tj) = (x.at(i), t.at(j));
            if flow.in_domain(tj, xi) {
                f(xi, tj)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(flow, x, t, samples)
    }

    pub fn from_real_fn<F>(flow: FlowModel, x: XGrid, t: TGrid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        Self::from_fn(flow, x, t, |x, t| Complex64::new(f(x, t), 0.0))
    }

    /// Uses a `points`-node Lagrange stencil for off-grid reads in `x`.
    pub fn with_interpolation(mut self, points: usize) -> Self {
        assert!(points >= 2, "interpolation needs at least two nodes");
        self.interp_points = points;
        self
    }

    pub fn flow(&self) -> FlowModel {
        self.flow
    }

    pub fn x_grid(&self) -> XGrid {
        self.x
    }

    pub fn t_grid(&self) -> TGrid {
        self.t
    }

    pub fn samples(&self) -> &Array2<Complex64> {
        &self.samples
    }

    pub fn interp_points(&self) -> usize {
        self.interp_points
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_compatible(&self, other: &GroupoidKernel) -> Result<()> {
        if self.flow != other.flow {
            return Err(Error::GridMismatch(format!("flows differ: {:?} vs {:?}", self.flow, other.flow)));
        }
        if !self.x.same_as(&other.x) {
            return Err(Error::GridMismatch(format!("x grids differ: {:?} vs {:?}", self.x, other.x)));
        }
        if (self.t.step - other.t.step).abs() > ALIGN_TOL * self.t.step {
            return Err(Error::GridMismatch(format!("t steps differ: {} vs {}", self.t.step, other.t.step)));
        }
        Ok(())
    }

    /// `φ_t(x)` along `times`, `NaN` where the monomial flow is undefined.
    fn orbit(&self, x: f64, times: &[f64]) -> Result<Vec<f64>> {
        if self.flow.variant() == FlowVariant::Monomial {
            return Ok(times
                .iter()
                .map(|&t| if self.flow.in_domain(t, x) { self.flow.flow_eval(t, x).unwrap_or(f64::NAN) } else { f64::NAN })
                .collect());
        }
        self.flow.orbit(x, times)
    }

    /// Adds `coef · f(y, ·)` into `out`, reading the `t` row at `y` by
    /// interpolation in `x`; `reversed` reads the row backwards.
    fn accumulate_row(&self, y: f64, coef: Complex64, out: &mut [Complex64], reversed: bool) {
        let u = (y - self.x.start) / self.x.step;
        let (base, w) = lagrange_weights(u, self.interp_points);
        let nt = self.t.count;
        for (l, wl) in w.iter().enumerate() {
            let idx = base + l as i64;
            if idx < 0 || idx as usize >= self.x.count || *wl == 0.0 {
                continue;
            }
            let row = self.samples.row(idx as usize);
            let c = coef * wl;
            if reversed {
                for (o, v) in out.iter_mut().zip(row.iter().rev()) {
                    *o += c * v;
                }
            } else {
                for (o, v) in out.iter_mut().zip(row.iter()).take(nt) {
                    *o += c * v;
                }
            }
        }
    }

    /// `(f*g)(x,t) = ∫ f(φ_s(x), t−s) g(x,s) ds` by the trapezoid rule on the
    /// `s` grid of `g`. The result lives on the `t` window that is the sum of
    /// the two windows; the `x` window is unchanged.
    pub fn convolve(&self, g: &GroupoidKernel) -> Result<GroupoidKernel> {
        self.convolve_rows(g, 0..self.x.count)
    }

    /// [`GroupoidKernel::convolve`] evaluated only at the `x` nodes in
    /// `[x_lo, x_hi]`. The returned kernel is not checked for vanishing on its
    /// (smaller) window.
    pub fn convolve_restricted(&self, g: &GroupoidKernel, x_lo: f64, x_hi: f64) -> Result<GroupoidKernel> {
        let lo = ((x_lo - self.x.start) / self.x.step).ceil().max(0.0) as usize;
        let hi = (((x_hi - self.x.start) / self.x.step).floor() as i64).min(self.x.count as i64 - 1);
        if hi < lo as i64 + 1 {
            return Err(Error::InvalidArgument(format!("no x nodes in [{x_lo}, {x_hi}]")));
        }
        self.convolve_rows(g, lo..hi as usize + 1)
    }

    fn convolve_rows(&self, g: &GroupoidKernel, rows: std::ops::Range<usize>) -> Result<GroupoidKernel> {
        self.check_compatible(g)?;
        let h = g.t.step;
        let nf = self.t.count;
        let ng = g.t.count;
        let count = nf + ng - 1;
        let s_times = g.t.times();
        let computed: Vec<Result<Vec<Complex64>>> = rows
            .clone()
            .into_par_iter()
            .map(|i| {
                let mut out = vec![Complex64::new(0.0, 0.0); count];
                let grow = g.samples.row(i);
                if grow.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
                    return Ok(out);
                }
                let ys = self.orbit(self.x.at(i), &s_times)?;
                for (j, gv) in grow.iter().enumerate() {
                    if *gv == Complex64::new(0.0, 0.0) || ys[j].is_nan() {
                        continue;
                    }
                    self.accumulate_row(ys[j], gv * h, &mut out[j..j + nf], false);
                }
                Ok(out)
            })
            .collect();
        let mut samples = Array2::zeros((rows.len(), count));
        for (r, row) in computed.into_iter().enumerate() {
            for (j, v) in row?.into_iter().enumerate() {
                samples[[r, j]] = v;
            }
        }
        let x = XGrid { start: self.x.at(rows.start), step: self.x.step, count: rows.len() };
        let t = TGrid::from_indices(h, self.t.first + g.t.first, count);
        Ok(GroupoidKernel::from_parts(self.flow, x, t, samples, self.interp_points))
    }

    /// `f*(x,t) = conj f(φ_t(x), −t)`, zero where `φ_t(x)` is undefined.
    pub fn adjoint(&self) -> Result<GroupoidKernel> {
        let nt = self.t.count;
        let t = TGrid::from_indices(self.t.step, -(self.t.first + nt as i64 - 1), nt);
        let times = t.times();
        let rows: Vec<Result<Vec<Complex64>>> = (0..self.x.count)
            .into_par_iter()
            .map(|i| {
                let ys = self.orbit(self.x.at(i), &times)?;
                let mut out = vec![Complex64::new(0.0, 0.0); nt];
                for (j, y) in ys.iter().enumerate() {
                    if y.is_nan() {
                        continue;
                    }
                    let mut cell = [Complex64::new(0.0, 0.0)];
                    // column nt-1-j of f holds time −t_j
                    let u = (y - self.x.start) / self.x.step;
                    let (base, w) = lagrange_weights(u, self.interp_points);
                    for (l, wl) in w.iter().enumerate() {
                        let idx = base + l as i64;
                        if idx >= 0 && (idx as usize) < self.x.count {
                            cell[0] += self.samples[[idx as usize, nt - 1 - j]] * wl;
                        }
                    }
                    out[j] = cell[0].conj();
                }
                Ok(out)
            })
            .collect();
        let mut samples = Array2::zeros((self.x.count, nt));
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row?.into_iter().enumerate() {
                samples[[i, j]] = v;
            }
        }
        Ok(GroupoidKernel::from_parts(self.flow, self.x, t, samples, self.interp_points))
    }

    /// `(a·g)(x,t) = a(φ_t(x)) g(x,t)`.
    pub fn module_mult_left(&self, a: &BaseFn) -> Result<GroupoidKernel> {
        let times = self.t.times();
        let mut samples = self.samples.clone();
        for i in 0..self.x.count {
            if self.samples.row(i).iter().all(|v| v.norm() == 0.0) {
                continue;
            }
            let ys = self.orbit(self.x.at(i), &times)?;
            for (j, y) in ys.iter().enumerate() {
                samples[[i, j]] *= if y.is_nan() { 0.0 } else { a.eval(*y) };
            }
        }
        Ok(GroupoidKernel::from_parts(self.flow, self.x, self.t, samples, self.interp_points))
    }

    /// `(g·a)(x,t) = a(x) g(x,t)`.
    pub fn module_mult_right(&self, a: &BaseFn) -> GroupoidKernel {
        let mut samples = self.samples.clone();
        for (i, mut row) in samples.rows_mut().into_iter().enumerate() {
            let ai = a.eval(self.x.at(i));
            row.iter_mut().for_each(|v| *v *= ai);
        }
        GroupoidKernel::from_parts(self.flow, self.x, self.t, samples, self.interp_points)
    }

    /// Pointwise product with the cocycle `Δ(x,t)`.
    pub fn mul_by_delta(&self) -> Result<GroupoidKernel> {
        let mut samples = self.samples.clone();
        for ((i, j), v) in samples.indexed_iter_mut() {
            if v.norm() == 0.0 {
                continue;
            }
            *v *= self.flow.cocycle_delta(self.x.at(i), self.t.at(j))?;
        }
        Ok(GroupoidKernel::from_parts(self.flow, self.x, self.t, samples, self.interp_points))
    }

    pub fn scale(&self, c: Complex64) -> GroupoidKernel {
        GroupoidKernel::from_parts(self.flow, self.x, self.t, self.samples.mapv(|v| v * c), self.interp_points)
    }

    fn combine(&self, other: &GroupoidKernel, sign: f64) -> Result<GroupoidKernel> {
        self.check_compatible(other)?;
        let first = self.t.first.min(other.t.first);
        let last = (self.t.first + self.t.count as i64).max(other.t.first + other.t.count as i64);
        let count = (last - first) as usize;
        let mut samples = Array2::zeros((self.x.count, count));
        for (src, s) in [(self, 1.0), (other, sign)] {
            let off = (src.t.first - first) as usize;
            for ((i, j), v) in src.samples.indexed_iter() {
                samples[[i, off + j]] += v * s;
            }
        }
        Ok(GroupoidKernel::from_parts(
            self.flow,
            self.x,
            TGrid::from_indices(self.t.step, first, count),
            samples,
            self.interp_points,
        ))
    }

    pub fn add(&self, other: &GroupoidKernel) -> Result<GroupoidKernel> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &GroupoidKernel) -> Result<GroupoidKernel> {
        self.combine(other, -1.0)
    }

    /// `sup |f − g| / max(sup |f|, sup |g|)` on the union of the windows.
    pub fn rel_diff(&self, other: &GroupoidKernel) -> Result<f64> {
        let scale = self.sup_norm().max(other.sup_norm());
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(self.sub(other)?.sup_norm() / scale)
    }

    /// Value at an arbitrary point: Lagrange interpolation in both directions,
    /// zero outside the window.
    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        let (bx, wx) = lagrange_weights((x - self.x.start) / self.x.step, self.interp_points);
        let (bt, wt) = lagrange_weights(t / self.t.step - self.t.first as f64, self.interp_points);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, wa) in wx.iter().enumerate() {
            let i = bx + a as i64;
            if i < 0 || i as usize >= self.x.count || *wa == 0.0 {
                continue;
            }
            for (b, wb) in wt.iter().enumerate() {
                let j = bt + b as i64;
                if j < 0 || j as usize >= self.t.count || *wb == 0.0 {
                    continue;
                }
                acc += self.samples[[i as usize, j as usize]] * (wa * wb);
            }
        }
        acc
    }

    fn row_integrals(&self, weights: Option<&Array2<f64>>) -> Vec<f64> {
        let h = self.t.step;
        self.samples
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                h * row
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v.norm() * weights.map_or(1.0, |w| w[[i, j]]))
                    .sum::<f64>()
            })
            .collect()
    }

    /// `sup_x max(∫|f(x,t)| dt, ∫|f*(x,t)| dt)`.
    pub fn l1_groupoid_norm(&self) -> Result<f64> {
        let adj = self.adjoint()?;
        Ok(self.row_integrals(None).into_iter().chain(adj.row_integrals(None)).fold(0.0, f64::max))
    }

    fn beta_weights(&self) -> Result<Array2<f64>> {
        let times = self.t.times();
        let mut w = Array2::zeros((self.x.count, self.t.count));
        for i in 0..self.x.count {
            let x = self.x.at(i);
            if x == 0.0 || self.samples.row(i).iter().all(|v| v.norm() == 0.0) {
                w.row_mut(i).fill(1.0);
                continue;
            }
            let admissible: Vec<usize> = (0..times.len()).filter(|&j| self.flow.in_domain(times[j], x)).collect();
            let ts: Vec<f64> = admissible.iter().map(|&j| times[j]).collect();
            let jets = self.flow.orbit_with_derivative(x, &ts)?;
            for (&j, (_, d)) in admissible.iter().zip(jets) {
                w[[i, j]] = d.sqrt();
            }
        }
        Ok(w)
    }

    /// The same with the weight `β(x,t)`.
    pub fn l1_as_norm(&self) -> Result<f64> {
        let adj = self.adjoint()?;
        let a = self.row_integrals(Some(&self.beta_weights()?));
        let b = adj.row_integrals(Some(&adj.beta_weights()?));
        Ok(a.into_iter().chain(b).fold(0.0, f64::max))
    }

    /// Jet of order `p` at `x = 0`: coefficients `f_n(t) = ∂_x^n f(0,t)/n!`
    /// from a least-squares polynomial of degree `p+4` through the `2p+7`
    /// nodes closest to 0.
    pub fn taylor_map(&self, p: usize) -> Result<Jet<GridFn>> {
        self.taylor_map_fit(p, p + 4)
    }

    /// [`GroupoidKernel::taylor_map`] with a fit of the given `degree ≥ p`
    /// through the `degree + p + 3` nodes closest to 0 (rounded up to odd).
    pub fn taylor_map_fit(&self, p: usize, degree: usize) -> Result<Jet<GridFn>> {
        if degree < p {
            return Err(Error::InvalidArgument(format!("fit degree {degree} is below the jet order {p}")));
        }
        if !(self.x.start < 0.0 && self.x.end() > 0.0) {
            return Err(Error::InvalidArgument("x = 0 must lie strictly inside the x window".into()));
        }
        let half = (degree + p + 2) / 2;
        let centre = (-self.x.start / self.x.step).round() as i64;
        if centre - (half as i64) < 0 || centre + half as i64 >= self.x.count as i64 {
            return Err(Error::InvalidArgument(format!(
                "order {p} needs {} x nodes around 0; the grid has too few",
                2 * half + 1
            )));
        }
        let nodes: Vec<usize> = ((centre - half as i64)..=(centre + half as i64)).map(|i| i as usize).collect();
        let v = DMatrix::from_fn(nodes.len(), degree + 1, |r, c| (self.x.at(nodes[r]) / self.x.step).powi(c as i32));
        let pinv = v
            .pseudo_inverse(1e-13)
            .map_err(|e| Error::InvalidArgument(format!("least-squares fit failed: {e}")))?;
        let mut coeffs = Vec::with_capacity(p + 1);
        for n in 0..=p {
            let scale = self.x.step.powi(-(n as i32));
            let samples = (0..self.t.count)
                .map(|j| {
                    nodes.iter().enumerate().map(|(r, &i)| self.samples[[i, j]] * pinv[(n, r)]).sum::<Complex64>()
                        * scale
                })
                .collect();
            coeffs.push(GridFn::from_parts(self.t.start(), self.t.step, samples));
        }
        Jet::new(self.flow.k(), p, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_kernel(flow: FlowModel, sx: f64, st: f64, x0: f64, step: f64) -> GroupoidKernel {
        let x = XGrid::symmetric(5.0, step).unwrap();
        let t = TGrid::symmetric(2.0, step).unwrap();
        GroupoidKernel::from_real_fn(flow, x, t, |x, t| {
            (-(x - x0) * (x - x0) / (2.0 * sx * sx) - t * t / (2.0 * st * st)).exp()
        })
        .unwrap()
    }

    #[test]
    fn boundary_and_domain_checks() {
        let flow = FlowModel::rescaled(2).unwrap();
        let x = XGrid::symmetric(1.0, 0.1).unwrap();
        let t = TGrid::symmetric(1.0, 0.1).unwrap();
        assert!(matches!(
            GroupoidKernel::from_real_fn(flow, x, t, |_, _| 1.0),
            Err(Error::SupportLeak(_))
        ));
        let mono = FlowModel::monomial(2).unwrap();
        let samples = Array2::from_shape_fn((x.count, t.count), |(i, j)| {
            if i == 20 && j == 20 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        // node (x, t) = (1, 1) sits on the boundary of the domain t·x < 1
        assert!(GroupoidKernel::new(mono, x, t, samples.clone()).is_err());
        assert!(TGrid::new(0.05, 0.1, 3).is_err());
    }

    #[test]
    fn convolving_with_zero_gives_zero() {
        let flow = FlowModel::rescaled(2).unwrap();
        let f = gaussian_kernel(flow, 0.6, 0.25, 0.0, 0.1);
        let z = f.scale(Complex64::new(0.0, 0.0));
        let c = f.convolve(&z).unwrap();
        assert_eq!(c.sup_norm(), 0.0);
        assert_eq!(c.t_grid().count(), 2 * f.t_grid().count() - 1);
    }

    #[test]
    fn far_from_the_fixed_point_the_adjoint_is_a_reflection() {
        // the k = 3 rescaled field is x³/(1+x²): near x = 0 it is ~0, so a
        // kernel supported in a tiny neighbourhood of 0 barely feels the flow
        let flow = FlowModel::rescaled(3).unwrap();
        let x = XGrid::symmetric(0.5, 0.01).unwrap();
        let t = TGrid::symmetric(1.0, 0.01).unwrap();
        let f = GroupoidKernel::from_real_fn(flow, x, t, |x, t| {
            (-x * x / 0.005 - (t - 0.2) * (t - 0.2) / 0.02).exp()
        })
        .unwrap();
        let adj = f.adjoint().unwrap();
        for &(xx, tt) in &[(0.0, -0.2), (0.05, -0.1), (-0.03, -0.35)] {
            let expect = f.eval(xx, -tt);
            assert!((adj.eval(xx, tt) - expect).norm() < 1e-4, "{xx} {tt}");
        }
    }

    #[test]
    fn product_of_separable_kernels_in_the_trivial_limit() {
        // with k = 1 the flow e^t x fixes x = 0; test along that line only
        let flow = FlowModel::rescaled(1).unwrap();
        let f = gaussian_kernel(flow, 0.6, 0.25, 0.0, 0.05);
        let c = f.convolve(&f).unwrap();
        let exact = |t: f64| {
            // ∫ exp(−(t−s)²/(2σ²)) exp(−s²/(2σ²)) ds at x = 0
            let s2 = 0.25f64 * 0.25;
            (std::f64::consts::PI * s2).sqrt() * (-t * t / (4.0 * s2)).exp()
        };
        for &t in &[-0.4, 0.0, 0.3] {
            assert!((c.eval(0.0, t).re - exact(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn unit_base_function_is_neutral() {
        let flow = FlowModel::rescaled(2).unwrap();
        let f = gaussian_kernel(flow, 0.6, 0.25, 0.3, 0.1);
        let one = BaseFn::Constant { value: 1.0 };
        assert_eq!(f.module_mult_left(&one).unwrap().rel_diff(&f).unwrap(), 0.0);
        assert_eq!(f.module_mult_right(&one).rel_diff(&f).unwrap(), 0.0);
    }

    #[test]
    fn taylor_map_of_simple_kernels() {
        let flow = FlowModel::rescaled(2).unwrap();
        let x = XGrid::symmetric(6.0, 0.02).unwrap();
        let t = TGrid::symmetric(2.0, 0.02).unwrap();
        let b = |t: f64| (-t * t / 0.1).exp();
        let f = GroupoidKernel::from_real_fn(flow, x, t, |x, t| x * (-x * x).exp() * b(t)).unwrap();
        let jet = f.taylor_map(2).unwrap();
        let j = 100;
        assert!(jet.coeff(0).samples()[j].norm() < 1e-12);
        assert!((jet.coeff(1).samples()[j].re - b(0.0)).abs() < 1e-7);
        let g = GroupoidKernel::from_real_fn(flow, x, t, |x, t| (-x * x).exp() * b(t)).unwrap();
        let jet = g.taylor_map(2).unwrap();
        assert!((jet.coeff(0).samples()[j].re - 1.0).abs() < 1e-8);
        assert!(jet.coeff(1).samples()[j].norm() < 1e-10);
        assert!((jet.coeff(2).samples()[j].re + 1.0).abs() < 1e-7);
        let small = XGrid::symmetric(0.1, 0.02).unwrap();
        let tiny = GroupoidKernel::from_parts(flow, small, t, Array2::zeros((small.count, t.count())), 4);
        assert!(tiny.taylor_map(2).is_ok());
        assert!(tiny.taylor_map(3).is_err());
        assert!(tiny.taylor_map_fit(3, 5).is_ok());
    }

    #[test]
    fn norms_of_zero_and_symmetry() {
        let flow = FlowModel::rescaled(2).unwrap();
        let f = gaussian_kernel(flow, 0.6, 0.25, 0.0, 0.1);
        let z = f.scale(Complex64::new(0.0, 0.0));
        assert_eq!(z.l1_groupoid_norm().unwrap(), 0.0);
        assert_eq!(z.l1_as_norm().unwrap(), 0.0);
        let adj = f.adjoint().unwrap();
        let (a, b) = (f.l1_groupoid_norm().unwrap(), adj.l1_groupoid_norm().unwrap());
        assert!((a - b).abs() < 1e-6 * a);
    }
}
