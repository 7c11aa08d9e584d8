//! Taylor coefficients `φ_m^n(t)` of the powers `φ_t(x)^n` at `x = 0`.

use super::{FlowModel, FlowVariant, Orientation};
use crate::error::{Error, Result};
use crate::poly::{gen_binomial, Poly};
use crate::series::Series;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const DEFAULT_M_MAX: usize = 8;

/// The function `t ↦ poly(t)·e^{rate·t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorEntry {
    pub poly: Poly,
    pub rate: f64,
}

impl TaylorEntry {
    pub fn zero() -> Self {
        TaylorEntry { poly: Poly::zero(), rate: 0.0 }
    }

    pub fn polynomial(poly: Poly) -> Self {
        TaylorEntry { poly, rate: 0.0 }
    }

    pub fn exponential(rate: f64) -> Self {
        TaylorEntry { poly: Poly::one(), rate }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.rate == 0.0 {
            self.poly.eval(t)
        } else {
            self.poly.eval(t) * (self.rate * t).exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTaylorTable {
    model: FlowModel,
    m_max: usize,
    /// `entries[n][m]`, zero for `m < n`.
    entries: Vec<Vec<TaylorEntry>>,
}

/// A power series in `x` whose coefficients are polynomials in `t`.
#[derive(Clone)]
struct PolySeries(Vec<Poly>);

impl PolySeries {
    fn mul(&self, other: &PolySeries) -> PolySeries {
        let order = self.0.len() - 1;
        let mut out = vec![Poly::zero(); order + 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        PolySeries(out)
    }
}

impl FlowTaylorTable {
    /// Exact table: the binomial closed form for the monomial flow, and
    /// formal Picard iteration for the rescaled one.
    pub fn new(model: FlowModel, m_max: usize) -> Self {
        match model.variant() {
            FlowVariant::Monomial => Self::closed_form(model, m_max),
            FlowVariant::CompleteRescaled if model.k() == 1 => Self::closed_form(model, m_max),
            FlowVariant::CompleteRescaled => Self::picard(model, m_max).expect("k >= 2"),
        }
    }

    fn orientation_sign(model: &FlowModel) -> f64 {
        match model.orientation() {
            Orientation::Forward => 1.0,
            Orientation::Reversed => -1.0,
        }
    }

    /// `φ_{n+j(k−1)}^n = Π_{i<j} (n + i(k−1)) / j! · t^j`, or `e^{nt}` on the
    /// diagonal when `k = 1`.
    fn closed_form(model: FlowModel, m_max: usize) -> Self {
        let k = model.k() as usize;
        let sign = Self::orientation_sign(&model);
        let mut entries = vec![vec![TaylorEntry::zero(); m_max + 1]; m_max + 1];
        for (n, row) in entries.iter_mut().enumerate() {
            if k == 1 {
                row[n] = TaylorEntry::exponential(sign * n as f64);
                continue;
            }
            let mut c = 1.0;
            let mut j = 0usize;
            while n + j * (k - 1) <= m_max {
                row[n + j * (k - 1)] = TaylorEntry::polynomial(Poly::monomial(j, c));
                c *= sign * (n + j * (k - 1)) as f64 / (j + 1) as f64;
                j += 1;
                if c == 0.0 {
                    break;
                }
            }
        }
        FlowTaylorTable { model, m_max, entries }
    }

    /// Solves `∂_t Φ = X(Φ)`, `Φ(0) = x` by Picard iteration on truncated
    /// series with polynomial coefficients, then takes powers. Exact for
    /// `k ≥ 2`, where each sweep fixes at least one more coefficient.
    pub fn picard(model: FlowModel, m_max: usize) -> Result<Self> {
        let k = model.k() as usize;
        if k < 2 {
            return Err(Error::InvalidArgument("Picard table needs k >= 2; the k = 1 flow is not polynomial".into()));
        }
        let sign = Self::orientation_sign(&model);
        let mut field = vec![0.0; m_max + 1];
        match model.variant() {
            FlowVariant::Monomial => {
                if k <= m_max {
                    field[k] = sign;
                }
            }
            FlowVariant::CompleteRescaled => {
                let a = -((k - 1) as f64) / 2.0;
                let mut j = 0;
                while k + 2 * j <= m_max {
                    field[k + 2 * j] = sign * gen_binomial(a, j);
                    j += 1;
                }
            }
        }
        let mut identity = vec![Poly::zero(); m_max + 1];
        if m_max >= 1 {
            identity[1] = Poly::one();
        }
        let mut phi = PolySeries(identity.clone());
        for _ in 0..m_max {
            let mut power = PolySeries(vec![Poly::zero(); m_max + 1]);
            power.0[0] = Poly::one();
            let mut rhs = vec![Poly::zero(); m_max + 1];
            for &a in field.iter() {
                if a != 0.0 {
                    for (r, p) in rhs.iter_mut().zip(&power.0) {
                        *r = &*r + &p.scale(a);
                    }
                }
                power = power.mul(&phi);
            }
            phi = PolySeries(identity.iter().zip(&rhs).map(|(i, r)| i + &r.integral()).collect());
        }
        let mut entries = Vec::with_capacity(m_max + 1);
        let mut power = PolySeries(vec![Poly::zero(); m_max + 1]);
        power.0[0] = Poly::one();
        for _ in 0..=m_max {
            entries.push(power.0.iter().cloned().map(TaylorEntry::polynomial).collect());
            power = power.mul(&phi);
        }
        Ok(FlowTaylorTable { model, m_max, entries })
    }

    pub fn model(&self) -> FlowModel {
        self.model
    }

    pub fn k(&self) -> u32 {
        self.model.k()
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `φ_m^n`.
    pub fn get(&self, n: usize, m: usize) -> &TaylorEntry {
        &self.entries[n][m]
    }

    pub fn eval(&self, n: usize, m: usize, t: f64) -> f64 {
        self.entries[n][m].eval(t)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exp_rate: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    k: u32,
    #[serde(default = "default_variant")]
    variant: FlowVariant,
    #[serde(default)]
    orientation: Orientation,
    #[serde(rename = "M_max")]
    m_max: usize,
    entries: Vec<EntryRecord>,
}

fn default_variant() -> FlowVariant {
    FlowVariant::Monomial
}

impl Serialize for FlowTaylorTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for (n, row) in self.entries.iter().enumerate() {
            for (m, e) in row.iter().enumerate().skip(n) {
                if e.is_zero() {
                    continue;
                }
                let exp_form = e.rate != 0.0 || self.model.k() == 1;
                let poly_coeffs = if exp_form && e.poly == Poly::one() { None } else { Some(e.poly.coeffs().to_vec()) };
                entries.push(EntryRecord { n, m, poly_coeffs, exp_rate: exp_form.then_some(e.rate) });
            }
        }
        TableRecord {
            k: self.model.k(),
            variant: self.model.variant(),
            orientation: self.model.orientation(),
            m_max: self.m_max,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlowTaylorTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = TableRecord::deserialize(d)?;
        let mut model = FlowModel::new(rec.k, rec.variant).map_err(D::Error::custom)?;
        if rec.orientation == Orientation::Reversed {
            model = model.reversed();
        }
        let mut entries = vec![vec![TaylorEntry::zero(); rec.m_max + 1]; rec.m_max + 1];
        for e in rec.entries {
            if e.n > e.m || e.m > rec.m_max {
                return Err(D::Error::custom(format!("entry ({}, {}) outside the table", e.n, e.m)));
            }
            let poly = e.poly_coeffs.map(Poly::new).unwrap_or_else(Poly::one);
            entries[e.n][e.m] = TaylorEntry { poly, rate: e.exp_rate.unwrap_or(0.0) };
        }
        Ok(FlowTaylorTable { model, m_max: rec.m_max, entries })
    }
}

/// `|φ_m^n(t) − Σ_{i=n}^m φ_m^i(t−s) φ_i^n(s)|`.
pub fn check_cocycle_identity(table: &FlowTaylorTable, n: usize, m: usize, t: f64, s: f64) -> f64 {
    let lhs = table.eval(n, m, t);
    let rhs: f64 = (n..=m).map(|i| table.eval(i, m, t - s) * table.eval(n, i, s)).sum();
    (lhs - rhs).abs()
}

/// Relative residual of `[m](f∘g)^n = Σ_{i=n}^m ([m]g^i)([i]f^n)`, scaled by
/// `max(1, |lhs|)`.
pub fn composition_identity_residual(f: &Series, g: &Series, n: usize, m: usize) -> f64 {
    let lhs = f.compose(g).pow(n).coeff(m);
    let fna = f.pow(n);
    let mut gi = g.pow(n);
    let mut rhs = 0.0;
    for i in n..=m {
        rhs += gi.coeff(m) * fna.coeff(i);
        gi = &gi * g;
    }
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}

/// Maximum of [`composition_identity_residual`] over `trials` random pairs
/// truncated at order `m`. For `k ≥ 2` the series have the shape of a flow,
/// `x + Σ_{j ≥ k} c_j x^j`.
pub fn check_composition_identity<R: Rng>(k: u32, n: usize, m: usize, trials: usize, rng: &mut R) -> f64 {
    let draw = |rng: &mut R| {
        let coeffs = (0..=m)
            .map(|j| match j {
                0 => 0.0,
                1 if k >= 2 => 1.0,
                j if k >= 2 && j < k as usize => 0.0,
                _ => rng.gen_range(-1.0..1.0),
            })
            .collect();
        Series::from_coeffs(coeffs, m)
    };
    (0..trials)
        .map(|_| {
            let f = draw(rng);
            let g = draw(rng);
            composition_identity_residual(&f, &g, n, m)
        })
        .fold(0.0, f64::max)
}
