//! Truncated jets `f_0 + f_1 x + … + f_p x^p` with the flow-twisted product.
//!
//! A jet of order `p` lives in the quotient by `x^{p+1}`. The commutativity
//! dichotomy is phrased with the quotient by `x^q`, which is order `q − 1`
//! here.

use crate::coeff_ring::{CoefficientFunction, CoefficientRing, GaussPolyFn};
use crate::error::{Error, Result};
use crate::flow::{FlowModel, FlowTaylorTable, DEFAULT_M_MAX};
use crate::poly::Poly;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet<C = CoefficientFunction> {
    k: u32,
    p: usize,
    coeffs: Vec<C>,
}

impl<C: CoefficientRing> Jet<C> {
    pub fn new(k: u32, p: usize, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != p + 1 {
            return Err(Error::JetMismatch(format!("order {p} needs {} coefficients, got {}", p + 1, coeffs.len())));
        }
        if let Some(first) = coeffs.first() {
            if let Some(bad) = coeffs.iter().find(|c| c.kind() != first.kind()) {
                return Err(Error::RepresentationMismatch(format!(
                    "jet mixes {} and {} coefficients",
                    first.kind(),
                    bad.kind()
                )));
            }
        }
        Ok(Jet { k, p, coeffs })
    }

    /// The zero jet with coefficients of the same kind (and grid) as `like`.
    pub fn zero(k: u32, p: usize, like: &C) -> Self {
        Jet { k, p, coeffs: vec![like.zero_like(); p + 1] }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, q: usize) -> &C {
        &self.coeffs[q]
    }

    /// Image in the quotient by `x^{q+1}`.
    pub fn truncate(&self, q: usize) -> Result<Self> {
        if q > self.p {
            return Err(Error::JetMismatch(format!("cannot truncate order {} to {q}", self.p)));
        }
        Ok(Jet { k: self.k, p: q, coeffs: self.coeffs[..=q].to_vec() })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.k != other.k || self.p != other.p {
            return Err(Error::JetMismatch(format!(
                "(k, p) = ({}, {}) vs ({}, {})",
                self.k, self.p, other.k, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Jet { k: self.k, p: self.p, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(Jet { k: self.k, p: self.p, coeffs })
    }

    pub fn scale(&self, c: f64) -> Self {
        Jet { k: self.k, p: self.p, coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// Largest coefficient sup norm.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.sup_norm()).fold(0.0, f64::max)
    }
}

/// Product structure on jets of a fixed flow.
#[derive(Debug, Clone)]
pub struct JetAlgebra {
    table: FlowTaylorTable,
}

impl JetAlgebra {
    /// Supports jets up to order `max(max_order, DEFAULT_M_MAX)`.
    pub fn new(model: FlowModel, max_order: usize) -> Self {
        JetAlgebra { table: FlowTaylorTable::new(model, max_order.max(DEFAULT_M_MAX)) }
    }

    pub fn from_table(table: FlowTaylorTable) -> Self {
        JetAlgebra { table }
    }

    pub fn k(&self) -> u32 {
        self.table.k()
    }

    pub fn table(&self) -> &FlowTaylorTable {
        &self.table
    }

    fn check<C: CoefficientRing>(&self, f: &Jet<C>) -> Result<()> {
        if f.k != self.k() {
            return Err(Error::JetMismatch(format!("jet has k = {}, algebra has k = {}", f.k, self.k())));
        }
        if f.p > self.table.m_max() {
            return Err(Error::JetMismatch(format!("order {} exceeds table size {}", f.p, self.table.m_max())));
        }
        Ok(())
    }

    /// `φ_m^n · g` pointwise in `t`.
    fn twist<C: CoefficientRing>(&self, n: usize, m: usize, g: &C) -> Option<C> {
        let e = self.table.get(n, m);
        if e.is_zero() {
            return None;
        }
        if e.rate == 0.0 && e.poly == Poly::one() {
            return Some(g.clone());
        }
        Some(g.mul_by_poly_exp(&e.poly, e.rate))
    }

    /// `h_q = Σ_{n ≤ m ≤ q} f_n * (φ_m^n g_{q−m})` for every `q ≤ p`.
    pub fn jet_mul<C: CoefficientRing>(&self, f: &Jet<C>, g: &Jet<C>) -> Result<Jet<C>> {
        f.check_compatible(g)?;
        self.check(f)?;
        let mut coeffs = Vec::with_capacity(f.p + 1);
        for q in 0..=f.p {
            let mut h = f.coeffs[0].zero_like();
            for m in 0..=q {
                for n in 0..=m {
                    if let Some(tw) = self.twist(n, m, &g.coeffs[q - m]) {
                        h = h.add(&f.coeffs[n].convolve(&tw)?)?;
                    }
                }
            }
            coeffs.push(h);
        }
        Jet::new(f.k, f.p, coeffs)
    }

    /// `x·f`, with coefficients `Σ_{m ≥ 1} φ_m^1 f_{q−m}`.
    pub fn x_mult_left<C: CoefficientRing>(&self, f: &Jet<C>) -> Result<Jet<C>> {
        self.check(f)?;
        if f.p == 0 {
            return Err(Error::JetMismatch("x vanishes in the order-0 quotient".into()));
        }
        let mut coeffs = vec![f.coeffs[0].zero_like()];
        for q in 1..=f.p {
            let mut h = f.coeffs[0].zero_like();
            for m in 1..=q {
                if let Some(tw) = self.twist(1, m, &f.coeffs[q - m]) {
                    h = h.add(&tw)?;
                }
            }
            coeffs.push(h);
        }
        Jet::new(f.k, f.p, coeffs)
    }

    /// `f·x`: shift up one degree and truncate.
    pub fn x_mult_right<C: CoefficientRing>(&self, f: &Jet<C>) -> Result<Jet<C>> {
        self.check(f)?;
        if f.p == 0 {
            return Err(Error::JetMismatch("x vanishes in the order-0 quotient".into()));
        }
        let mut coeffs = vec![f.coeffs[0].zero_like()];
        coeffs.extend(f.coeffs[..f.p].iter().cloned());
        Jet::new(f.k, f.p, coeffs)
    }

    pub fn commutator<C: CoefficientRing>(&self, f: &Jet<C>, g: &Jet<C>) -> Result<Jet<C>> {
        self.jet_mul(f, g)?.sub(&self.jet_mul(g, f)?)
    }

    /// Sup norm of the defect in the defining relation of order `p = k`:
    /// `x·f − f·x − δ(f_0) x^k` for `k ≥ 2`, and `x·f − Δ(f_0) x` for `k = 1`,
    /// with `δ` multiplication by `t` and `Δ` by `e^t`.
    pub fn relation_defect<C: CoefficientRing>(&self, f: &Jet<C>) -> Result<f64> {
        let k = self.k() as usize;
        if f.p != k {
            return Err(Error::JetMismatch(format!("relation lives at order p = k = {k}, got {}", f.p)));
        }
        let left = self.x_mult_left(f)?;
        let like = &f.coeffs[0];
        let mut expected = vec![like.zero_like(); k + 1];
        let defect = if k == 1 {
            expected[1] = like.mul_by_exp(1.0);
            left.sub(&Jet::new(f.k, f.p, expected)?)?
        } else {
            expected[k] = like.mul_by_t();
            left.sub(&self.x_mult_right(f)?)?.sub(&Jet::new(f.k, f.p, expected)?)?
        };
        Ok(defect.sup_norm())
    }
}

/// Random jet with independent [`crate::random::gauss_poly`] coefficients.
pub fn random_jet<R: Rng>(k: u32, p: usize, rng: &mut R) -> Jet<GaussPolyFn> {
    Jet { k, p, coeffs: (0..=p).map(|_| crate::random::gauss_poly(rng)).collect() }
}

/// The pair `f = (0, b, 0, …)`, `g = (c, 0, …)` with `b = c = e^{−t²/2}`,
/// both of unit sup norm. Their commutator first appears at order `k`.
pub fn commutator_witness(k: u32, p: usize) -> (Jet<GaussPolyFn>, Jet<GaussPolyFn>) {
    let b = GaussPolyFn::standard_gaussian();
    let mut f = vec![GaussPolyFn::zero(); p + 1];
    let mut g = vec![GaussPolyFn::zero(); p + 1];
    if p >= 1 {
        f[1] = b.clone();
    }
    g[0] = b;
    (Jet { k, p, coeffs: f }, Jet { k, p, coeffs: g })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorRow {
    /// Truncation order (quotient by `x^{order+1}`).
    pub order: usize,
    pub max_norm: f64,
}

/// For every truncation order up to `max_order`, the largest commutator sup
/// norm over `trials` random pairs, plus the witness pair from order `k` on.
pub fn commutativity_report<R: Rng>(
    model: FlowModel,
    max_order: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<CommutatorRow>> {
    let alg = JetAlgebra::new(model, max_order);
    let k = model.k();
    let mut rows = Vec::with_capacity(max_order + 1);
    for order in 0..=max_order {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let f = random_jet(k, order, rng);
            let g = random_jet(k, order, rng);
            worst = worst.max(alg.commutator(&f, &g)?.sup_norm());
        }
        if order >= k as usize {
            let (f, g) = commutator_witness(k, order);
            worst = worst.max(alg.commutator(&f, &g)?.sup_norm());
        }
        rows.push(CommutatorRow { order, max_norm: worst });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;

    fn gauss() -> GaussPolyFn {
        GaussPolyFn::standard_gaussian()
    }

    #[test]
    fn below_k_the_product_is_cauchy() {
        let alg = JetAlgebra::new(FlowModel::monomial(3).unwrap(), 2);
        let mut rng = seeded(5);
        let f = random_jet(3, 2, &mut rng);
        let g = random_jet(3, 2, &mut rng);
        let h = alg.jet_mul(&f, &g).unwrap();
        for q in 0..=2 {
            let mut cauchy = GaussPolyFn::zero();
            for n in 0..=q {
                cauchy = cauchy.add(&f.coeff(n).convolve(g.coeff(q - n)));
            }
            assert!(h.coeff(q).sub(&cauchy).sup_norm() < 1e-12);
        }
    }

    #[test]
    fn k2_twist_term() {
        let alg = JetAlgebra::new(FlowModel::monomial(2).unwrap(), 2);
        let (f, g) = commutator_witness(2, 2);
        let h = alg.jet_mul(&f, &g).unwrap();
        let expect = gauss().convolve(&gauss().mul_by_t());
        assert!(h.coeff(0).is_zero());
        assert!(h.coeff(1).sub(&gauss().convolve(&gauss())).sup_norm() < 1e-14);
        assert!(h.coeff(2).sub(&expect).sup_norm() < 1e-14);
        let c = alg.commutator(&f, &g).unwrap();
        assert!(c.coeff(2).sub(&expect).sup_norm() < 1e-14);
        assert!(c.sup_norm() > 0.5);
    }

    #[test]
    fn x_multiplication_relations() {
        let b = gauss();
        let alg2 = JetAlgebra::new(FlowModel::monomial(2).unwrap(), 2);
        let f = Jet::new(2, 2, vec![b.clone(), GaussPolyFn::zero(), GaussPolyFn::zero()]).unwrap();
        let diff = alg2.x_mult_left(&f).unwrap().sub(&alg2.x_mult_right(&f).unwrap()).unwrap();
        assert!(diff.coeff(0).is_zero() && diff.coeff(1).is_zero());
        assert!(diff.coeff(2).sub(&b.mul_by_t()).sup_norm() < 1e-15);
        let alg1 = JetAlgebra::new(FlowModel::monomial(1).unwrap(), 1);
        let f = Jet::new(1, 1, vec![b.clone(), GaussPolyFn::zero()]).unwrap();
        let left = alg1.x_mult_left(&f).unwrap();
        assert!(left.coeff(1).sub(&b.mul_by_exp(1.0)).sup_norm() < 1e-15);
        assert!(alg1.relation_defect(&f).unwrap() < 1e-15);
    }

    #[test]
    fn mismatches_are_errors() {
        let alg = JetAlgebra::new(FlowModel::monomial(2).unwrap(), 3);
        let mut rng = seeded(1);
        let f = random_jet(2, 2, &mut rng);
        let g = random_jet(2, 3, &mut rng);
        assert!(matches!(alg.jet_mul(&f, &g), Err(Error::JetMismatch(_))));
        let h = random_jet(3, 2, &mut rng);
        assert!(alg.jet_mul(&h, &h).is_err());
        assert!(alg.x_mult_left(&random_jet(2, 0, &mut rng)).is_err());
        assert!(Jet::new(2, 2, vec![gauss()]).is_err());
    }

    #[test]
    fn report_shows_the_dichotomy() {
        let rows = commutativity_report(FlowModel::monomial(3).unwrap(), 4, 3, &mut seeded(2)).unwrap();
        for row in &rows {
            if row.order < 3 {
                assert!(row.max_norm <= 1e-10, "{row:?}");
            } else {
                assert!(row.max_norm >= 1e-3, "{row:?}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = Jet::new(2, 1, vec![CoefficientFunction::GaussPoly(gauss()), CoefficientFunction::GaussPoly(gauss())])
            .unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["k"], 2);
        assert_eq!(v["p"], 1);
        assert_eq!(v["coeffs"][0]["kind"], "gauss_poly");
        let back: Jet = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
