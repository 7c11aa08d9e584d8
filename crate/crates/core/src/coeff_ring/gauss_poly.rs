//! Exact coefficient ring: finite sums of polynomial-times-Gaussian atoms.
//!
//! An atom `p(t) exp(-(t - mean)^2 / (2 variance))` is closed under convolution
//! (variances add), multiplication by polynomials and multiplication by `e^{ct}`
//! (the mean shifts by `c * variance`), so every jet relation can be evaluated
//! without discretization.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::{composite, GaussLegendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussAtom {
    pub poly: Poly,
    pub mean: f64,
    pub variance: f64,
}

impl GaussAtom {
    pub fn new(poly: Poly, mean: f64, variance: f64) -> Result<Self> {
        if !(variance > 0.0) || !variance.is_finite() || !mean.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Gaussian atom needs finite mean and positive variance, got mean {mean}, variance {variance}"
            )));
        }
        Ok(GaussAtom { poly, mean, variance })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let d = t - self.mean;
        self.poly.eval(t) * (-d * d / (2.0 * self.variance)).exp()
    }

    fn same_shape(&self, other: &GaussAtom) -> bool {
        let tol = 1e-13;
        (self.mean - other.mean).abs() <= tol * (1.0 + self.mean.abs())
            && (self.variance - other.variance).abs() <= tol * self.variance
    }

    /// Exact convolution of two atoms.
    ///
    /// With `V = v1 + v2` and `w = v1 v2 / V`, the product of the two Gaussians in
    /// the integration variable `s` is a Gaussian centred at `m(t) = alpha t + beta`
    /// with variance `w`, times `exp(-(t - mean1 - mean2)^2 / (2V))`. The polynomial
    /// part is the expectation of `p(t - S) q(S)` for `S = m(t) + sqrt(w) Z`.
    fn convolve(&self, other: &GaussAtom) -> GaussAtom {
        let (v1, v2) = (self.variance, other.variance);
        let var = v1 + v2;
        let w = v1 * v2 / var;
        let alpha = v2 / var;
        let beta = (v1 * other.mean - v2 * self.mean) / var;
        let sigma = w.sqrt();

        // Bivariate polynomials in (t, Z), indexed [z_degree][t_degree].
        let lhs_arg: Biv = vec![vec![-beta, 1.0 - alpha], vec![-sigma]];
        let rhs_arg: Biv = vec![vec![beta, alpha], vec![sigma]];
        let lhs = biv_compose(&self.poly, &lhs_arg);
        let rhs = biv_compose(&other.poly, &rhs_arg);
        let prod = biv_mul(&lhs, &rhs);

        let mut out = vec![0.0; prod.iter().map(Vec::len).max().unwrap_or(0)];
        let mut moment = 1.0; // E[Z^j] for even j
        for (j, row) in prod.iter().enumerate() {
            if j % 2 == 1 {
                continue;
            }
            if j >= 2 {
                moment *= (j - 1) as f64;
            }
            for (i, c) in row.iter().enumerate() {
                out[i] += c * moment;
            }
        }
        let scale = (2.0 * PI * w).sqrt();
        GaussAtom {
            poly: Poly::new(out).scale(scale),
            mean: self.mean + other.mean,
            variance: var,
        }
    }
}

type Biv = Vec<Vec<f64>>;

fn biv_mul(a: &Biv, b: &Biv) -> Biv {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let tdeg = a.iter().map(Vec::len).max().unwrap_or(0) + b.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![vec![0.0; tdeg.max(1)]; a.len() + b.len() - 1];
    for (za, ra) in a.iter().enumerate() {
        for (zb, rb) in b.iter().enumerate() {
            for (ta, ca) in ra.iter().enumerate() {
                for (tb, cb) in rb.iter().enumerate() {
                    out[za + zb][ta + tb] += ca * cb;
                }
            }
        }
    }
    out
}

fn biv_compose(p: &Poly, arg: &Biv) -> Biv {
    let mut acc: Biv = Vec::new();
    for &c in p.coeffs().iter().rev() {
        acc = biv_mul(&acc, arg);
        if acc.is_empty() {
            acc = vec![vec![0.0]];
        }
        acc[0][0] += c;
    }
    acc
}

/// A finite sum of Gaussian atoms; the empty sum is zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaussPolyFn {
    atoms: Vec<GaussAtom>,
}

impl GaussPolyFn {
    pub fn zero() -> Self {
        GaussPolyFn { atoms: Vec::new() }
    }

    pub fn from_atoms(atoms: Vec<GaussAtom>) -> Self {
        let mut f = GaussPolyFn::zero();
        for a in atoms {
            f.push(a);
        }
        f
    }

    /// `poly(t) exp(-(t - mean)^2 / (2 variance))`.
    pub fn atom(poly: Poly, mean: f64, variance: f64) -> Result<Self> {
        Ok(GaussPolyFn::from_atoms(vec![GaussAtom::new(poly, mean, variance)?]))
    }

    /// `exp(-t^2 / 2)`.
    pub fn standard_gaussian() -> Self {
        GaussPolyFn::from_atoms(vec![GaussAtom { poly: Poly::one(), mean: 0.0, variance: 1.0 }])
    }

    pub fn atoms(&self) -> &[GaussAtom] {
        &self.atoms
    }

    fn push(&mut self, atom: GaussAtom) {
        if atom.poly.is_zero() {
            return;
        }
        if let Some(existing) = self.atoms.iter_mut().find(|a| a.same_shape(&atom)) {
            existing.poly = &existing.poly + &atom.poly;
        } else {
            self.atoms.push(atom);
        }
        self.atoms.retain(|a| !a.poly.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.atoms.iter().map(|a| a.eval(t)).sum()
    }

    pub fn add(&self, other: &GaussPolyFn) -> GaussPolyFn {
        let mut out = self.clone();
        for a in &other.atoms {
            out.push(a.clone());
        }
        out
    }

    pub fn sub(&self, other: &GaussPolyFn) -> GaussPolyFn {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> GaussPolyFn {
        GaussPolyFn::from_atoms(
            self.atoms
                .iter()
                .map(|a| GaussAtom { poly: a.poly.scale(c), ..a.clone() })
                .collect(),
        )
    }

    pub fn convolve(&self, other: &GaussPolyFn) -> GaussPolyFn {
        let mut out = GaussPolyFn::zero();
        for a in &self.atoms {
            for b in &other.atoms {
                out.push(a.convolve(b));
            }
        }
        out
    }

    pub fn mul_by_t(&self) -> GaussPolyFn {
        self.mul_by_poly(&Poly::monomial(1, 1.0))
    }

    pub fn mul_by_poly(&self, p: &Poly) -> GaussPolyFn {
        GaussPolyFn::from_atoms(
            self.atoms
                .iter()
                .map(|a| GaussAtom { poly: &a.poly * p, ..a.clone() })
                .collect(),
        )
    }

    /// Pointwise `e^{ct} f(t)`: completing the square moves the mean to
    /// `mean + c variance` and multiplies by `exp(c mean + c^2 variance / 2)`.
    pub fn mul_by_exp(&self, c: f64) -> GaussPolyFn {
        if c == 0.0 {
            return self.clone();
        }
        GaussPolyFn::from_atoms(
            self.atoms
                .iter()
                .map(|a| GaussAtom {
                    poly: a.poly.scale((c * a.mean + 0.5 * c * c * a.variance).exp()),
                    mean: a.mean + c * a.variance,
                    variance: a.variance,
                })
                .collect(),
        )
    }

    /// Interval outside which every atom is below `exp(-width^2/2)` times its scale.
    pub fn effective_support(&self, width: f64) -> Option<(f64, f64)> {
        self.atoms.iter().fold(None, |acc, a| {
            let s = a.variance.sqrt() * width;
            let (lo, hi) = (a.mean - s, a.mean + s);
            Some(match acc {
                None => (lo, hi),
                Some((l, h)) => (l.min(lo), h.max(hi)),
            })
        })
    }

    fn min_sigma(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.variance.sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// Maximum of `|f|`, from dense sampling followed by golden-section refinement.
    pub fn sup_norm(&self) -> f64 {
        let Some((lo, hi)) = self.effective_support(14.0) else {
            return 0.0;
        };
        let step = self.min_sigma() / 32.0;
        let n = (((hi - lo) / step).ceil() as usize).clamp(64, 400_000);
        let h = (hi - lo) / n as f64;
        let (mut best_i, mut best) = (0usize, -1.0f64);
        for i in 0..=n {
            let v = self.eval(lo + i as f64 * h).abs();
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let (mut a, mut b) = (lo + (best_i as f64 - 1.0) * h, lo + (best_i as f64 + 1.0) * h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (self.eval(c).abs(), self.eval(d).abs());
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = self.eval(c).abs();
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = self.eval(d).abs();
            }
        }
        best.max(fc).max(fd)
    }

    fn integrate_abs_pow(&self, power: i32) -> f64 {
        let Some((lo, hi)) = self.effective_support(14.0) else {
            return 0.0;
        };
        let rule = GaussLegendre::new(20);
        let panels = (((hi - lo) / self.min_sigma()).ceil() as usize * 2).max(8);
        composite(&rule, lo, hi, panels, |t| self.eval(t).abs().powi(power))
    }

    pub fn l1_norm(&self) -> f64 {
        self.integrate_abs_pow(1)
    }

    pub fn l2_norm(&self) -> f64 {
        self.integrate_abs_pow(2).sqrt()
    }

    /// Samples on the grid `start + i * step`, `i < count`.
    pub fn sample(&self, start: f64, step: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| self.eval(start + i as f64 * step)).collect()
    }
}
