//! Flows of the generators `x^k d/dx` and their rescaled complete versions.
//!
//! The monomial flow is closed form,
//! `φ_t(x) = x / (1 − (k−1) t x^{k−1})^{1/(k−1)}` for `k ≥ 2` and `e^t x` for
//! `k = 1`, and is only defined where `(k−1) t x^{k−1} < 1`. The rescaled field
//! `(1+x²)^{−(k−1)/2} x^k d/dx` grows at most linearly, so its flow is global;
//! it is integrated numerically together with its variational equation.
//!
//! `β(x,t) = φ_t'(x)^{1/2}` for `x ≠ 0` and `β(0,t) = 1`. For `k = 1` the
//! derivative is `e^t` everywhere, so `β` jumps at `x = 0`.

pub mod ode;
mod taylor;

pub use taylor::{
    check_cocycle_identity, check_composition_identity, composition_identity_residual, FlowTaylorTable,
    TaylorEntry, DEFAULT_M_MAX,
};

use crate::error::{Error, Result};
use ode::Tolerance;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowVariant {
    Monomial,
    CompleteRescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Forward,
    /// The field `−X`, so `φ_t` becomes `φ_{−t}`.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlowModel {
    k: u32,
    variant: FlowVariant,
    #[serde(default)]
    orientation: Orientation,
}

impl FlowModel {
    pub fn new(k: u32, variant: FlowVariant) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("vanishing order k must be at least 1".into()));
        }
        Ok(FlowModel { k, variant, orientation: Orientation::Forward })
    }

    pub fn monomial(k: u32) -> Result<Self> {
        Self::new(k, FlowVariant::Monomial)
    }

    pub fn rescaled(k: u32) -> Result<Self> {
        Self::new(k, FlowVariant::CompleteRescaled)
    }

    /// The time-reversed flow.
    pub fn reversed(&self) -> Self {
        let orientation = match self.orientation {
            Orientation::Forward => Orientation::Reversed,
            Orientation::Reversed => Orientation::Forward,
        };
        FlowModel { orientation, ..*self }
    }

    pub fn with_variant(&self, variant: FlowVariant) -> Self {
        FlowModel { variant, ..*self }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variant(&self) -> FlowVariant {
        self.variant
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn sign(&self) -> f64 {
        match self.orientation {
            Orientation::Forward => 1.0,
            Orientation::Reversed => -1.0,
        }
    }

    /// Coefficient of `d/dx` at `x`.
    pub fn field(&self, x: f64) -> f64 {
        self.sign() * self.unsigned_field(x)
    }

    fn unsigned_field(&self, x: f64) -> f64 {
        let k = self.k as i32;
        match self.variant {
            FlowVariant::Monomial => x.powi(k),
            FlowVariant::CompleteRescaled => x.powi(k) * (1.0 + x * x).sqrt().powi(-(k - 1)),
        }
    }

    fn unsigned_field_derivative(&self, x: f64) -> f64 {
        let k = self.k as i32;
        match self.variant {
            FlowVariant::Monomial => k as f64 * x.powi(k - 1),
            FlowVariant::CompleteRescaled => {
                let r = (1.0 + x * x).sqrt();
                k as f64 * x.powi(k - 1) * r.powi(-(k - 1)) - (k - 1) as f64 * x.powi(k + 1) * r.powi(-(k + 1))
            }
        }
    }

    pub fn field_derivative(&self, x: f64) -> f64 {
        self.sign() * self.unsigned_field_derivative(x)
    }

    /// Whether `φ_t(x)` is defined.
    pub fn in_domain(&self, t: f64, x: f64) -> bool {
        match self.variant {
            FlowVariant::CompleteRescaled => true,
            FlowVariant::Monomial => {
                self.k == 1 || (self.k - 1) as f64 * self.sign() * t * x.powi(self.k as i32 - 1) < 1.0
            }
        }
    }

    fn check(&self, t: f64, x: f64) -> Result<()> {
        if self.in_domain(t, x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, t })
        }
    }

    pub fn flow_eval(&self, t: f64, x: f64) -> Result<f64> {
        self.check(t, x)?;
        let t = self.sign() * t;
        match self.variant {
            FlowVariant::Monomial => Ok(self.monomial_flow(t, x)),
            FlowVariant::CompleteRescaled => {
                if self.k == 1 {
                    return Ok(t.exp() * x);
                }
                let y = ode::integrate(|y: &[f64; 1]| [self.unsigned_field(y[0])], [x], t, Tolerance::default())?;
                Ok(y[0])
            }
        }
    }

    /// Spatial derivative `∂φ_t/∂x`.
    pub fn flow_derivative(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.flow_with_derivative(t, x)?.1)
    }

    /// `(φ_t(x), φ_t'(x))` from one integration.
    pub fn flow_with_derivative(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        self.check(t, x)?;
        let t = self.sign() * t;
        match self.variant {
            FlowVariant::Monomial => Ok((self.monomial_flow(t, x), self.monomial_derivative(t, x))),
            FlowVariant::CompleteRescaled => {
                if self.k == 1 {
                    return Ok((t.exp() * x, t.exp()));
                }
                let y = ode::integrate(
                    |y: &[f64; 2]| [self.unsigned_field(y[0]), self.unsigned_field_derivative(y[0]) * y[1]],
                    [x, 1.0],
                    t,
                    Tolerance::default(),
                )?;
                Ok((y[0], y[1]))
            }
        }
    }

    fn monomial_flow(&self, t: f64, x: f64) -> f64 {
        if self.k == 1 {
            return t.exp() * x;
        }
        let km1 = (self.k - 1) as f64;
        let d = 1.0 - km1 * t * x.powi(self.k as i32 - 1);
        x * d.powf(-1.0 / km1)
    }

    fn monomial_derivative(&self, t: f64, x: f64) -> f64 {
        if self.k == 1 {
            return t.exp();
        }
        let km1 = (self.k - 1) as f64;
        let d = 1.0 - km1 * t * x.powi(self.k as i32 - 1);
        d.powf(-(self.k as f64) / km1)
    }

    /// `φ_t(x)` for every `t` in `times`, which need not be sorted. The
    /// rescaled flow is integrated outward from `t = 0` along the orbit.
    pub fn orbit(&self, x: f64, times: &[f64]) -> Result<Vec<f64>> {
        if self.variant == FlowVariant::Monomial || self.k == 1 {
            return times.iter().map(|&t| self.flow_eval(t, x)).collect();
        }
        let mut order: Vec<usize> = (0..times.len()).collect();
        order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
        let mut out = vec![0.0; times.len()];
        let split = order.partition_point(|&i| times[i] < 0.0);
        let rhs = |y: &[f64; 1]| [self.field(y[0])];
        let (mut pos, mut tp) = (x, 0.0);
        for &i in &order[split..] {
            pos = ode::integrate(rhs, [pos], times[i] - tp, Tolerance::default())?[0];
            tp = times[i];
            out[i] = pos;
        }
        let (mut pos, mut tp) = (x, 0.0);
        for &i in order[..split].iter().rev() {
            pos = ode::integrate(rhs, [pos], times[i] - tp, Tolerance::default())?[0];
            tp = times[i];
            out[i] = pos;
        }
        Ok(out)
    }

    /// `(φ_t(x), φ_t'(x))` for every `t` in `times`, integrated outward from
    /// `t = 0` as in [`FlowModel::orbit`].
    pub fn orbit_with_derivative(&self, x: f64, times: &[f64]) -> Result<Vec<(f64, f64)>> {
        if self.variant == FlowVariant::Monomial || self.k == 1 {
            return times.iter().map(|&t| self.flow_with_derivative(t, x)).collect();
        }
        let mut order: Vec<usize> = (0..times.len()).collect();
        order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
        let mut out = vec![(0.0, 0.0); times.len()];
        let split = order.partition_point(|&i| times[i] < 0.0);
        let rhs = |y: &[f64; 2]| [self.field(y[0]), self.field_derivative(y[0]) * y[1]];
        for (range, reverse) in [(&order[split..], false), (&order[..split], true)] {
            let (mut state, mut tp) = ([x, 1.0], 0.0);
            let mut step = |i: usize| -> Result<()> {
                state = ode::integrate(rhs, state, times[i] - tp, Tolerance::default())?;
                tp = times[i];
                out[i] = (state[0], state[1]);
                Ok(())
            };
            if reverse {
                range.iter().rev().try_for_each(|&i| step(i))?;
            } else {
                range.iter().try_for_each(|&i| step(i))?;
            }
        }
        Ok(out)
    }

    /// The cocycle `Δ(x,t) = φ_t(x)/x`, extended to `x = 0` by `φ_t'(0)^{1/k}`.
    pub fn cocycle_delta(&self, x: f64, t: f64) -> Result<f64> {
        if x == 0.0 {
            let d = self.flow_derivative(t, 0.0)?;
            return Ok(d.powf(1.0 / self.k as f64));
        }
        Ok(self.flow_eval(t, x)? / x)
    }

    /// `β(x,t) = φ_t'(x)^{1/2}` for `x ≠ 0`, and `1` at `x = 0`.
    /// For `k = 1` this is discontinuous at `x = 0`, where `φ_t' = e^t` everywhere.
    pub fn beta_cocycle(&self, x: f64, t: f64) -> Result<f64> {
        self.check(t, x)?;
        if x == 0.0 {
            return Ok(1.0);
        }
        Ok(self.flow_derivative(t, x)?.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_closed_forms() {
        let m = FlowModel::monomial(2).unwrap();
        assert!((m.flow_eval(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((m.flow_derivative(1.0, 0.5).unwrap() - 4.0).abs() < 1e-14);
        assert!((m.beta_cocycle(0.5, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(matches!(m.flow_eval(1.0, 1.0), Err(Error::OutOfDomain { .. })));
        let m1 = FlowModel::monomial(1).unwrap();
        assert!((m1.flow_derivative(0.7, -3.0).unwrap() - 0.7f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn monomial_matches_integrated_ode() {
        for k in 2..=4u32 {
            let m = FlowModel::monomial(k).unwrap();
            let x = 0.4;
            let t = 0.8;
            let y = ode::integrate(|y: &[f64; 1]| [y[0].powi(k as i32)], [x], t, Tolerance::default()).unwrap();
            assert!((m.flow_eval(t, x).unwrap() - y[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_at_time_zero() {
        for variant in [FlowVariant::Monomial, FlowVariant::CompleteRescaled] {
            let m = FlowModel::new(3, variant).unwrap();
            assert_eq!(m.flow_eval(0.0, 1.7).unwrap(), 1.7);
            assert_eq!(m.flow_derivative(0.0, 1.7).unwrap(), 1.0);
            assert_eq!(m.cocycle_delta(1.7, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn rescaled_group_law_and_orbit() {
        let m = FlowModel::rescaled(3).unwrap();
        let (x, t, s) = (1.3, 0.9, -1.7);
        let lhs = m.flow_eval(t + s, x).unwrap();
        let rhs = m.flow_eval(t, m.flow_eval(s, x).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
        let times = [0.5, -1.0, 0.0, 2.0, -0.25];
        let orbit = m.orbit(x, &times).unwrap();
        let jets = m.orbit_with_derivative(x, &times).unwrap();
        for ((t, y), (y2, d)) in times.iter().zip(&orbit).zip(&jets) {
            assert!((m.flow_eval(*t, x).unwrap() - y).abs() < 1e-9 * y.abs().max(1.0));
            assert!((y2 - y).abs() < 1e-9 * y.abs().max(1.0));
            let d_ref = m.flow_derivative(*t, x).unwrap();
            assert!((d - d_ref).abs() < 1e-8 * d_ref);
        }
    }

    #[test]
    fn reversal_inverts_time() {
        let m = FlowModel::rescaled(2).unwrap();
        let r = m.reversed();
        assert!((r.flow_eval(0.6, 0.8).unwrap() - m.flow_eval(-0.6, 0.8).unwrap()).abs() < 1e-12);
        assert_eq!(r.field(0.5), -m.field(0.5));
    }

    #[test]
    fn delta_at_zero() {
        assert_eq!(FlowModel::monomial(2).unwrap().cocycle_delta(0.0, 3.0).unwrap(), 1.0);
        let d = FlowModel::monomial(1).unwrap().cocycle_delta(0.0, 0.5).unwrap();
        assert!((d - 0.5f64.exp()).abs() < 1e-15);
    }
}
