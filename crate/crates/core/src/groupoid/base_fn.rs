//! Smooth functions of `x` acting on kernels from either side.

use crate::error::{Error, Result};
use crate::interp::lagrange_weights;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseFn {
    Constant { value: f64 },
    /// `x`.
    Identity,
    /// `x^p`.
    Power { p: u32 },
    /// `exp(1 − 1/(1 − r²))` with `r = (x − center)/radius`, zero for `|r| ≥ 1`.
    Bump { center: f64, radius: f64 },
    /// Samples `values[i]` at `start + i·step`, interpolated with `points` nodes.
    Sampled { start: f64, step: f64, values: Vec<f64>, points: usize },
}

impl BaseFn {
    pub fn sampled(start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || values.is_empty() {
            return Err(Error::InvalidArgument("sampled base function needs a positive step and samples".into()));
        }
        Ok(BaseFn::Sampled { start, step, values, points: 4 })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BaseFn::Constant { value } => *value,
            BaseFn::Identity => x,
            BaseFn::Power { p } => x.powi(*p as i32),
            BaseFn::Bump { center, radius } => {
                let r = (x - center) / radius;
                if r.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - r * r)).exp()
                }
            }
            BaseFn::Sampled { start, step, values, points } => {
                let u = (x - start) / step;
                let (base, w) = lagrange_weights(u, *points);
                w.iter()
                    .enumerate()
                    .filter_map(|(l, wl)| {
                        let i = base + l as i64;
                        (i >= 0 && (i as usize) < values.len()).then(|| wl * values[i as usize])
                    })
                    .sum()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(BaseFn::Identity.eval(-1.5), -1.5);
        assert_eq!(BaseFn::Power { p: 3 }.eval(2.0), 8.0);
        let bump = BaseFn::Bump { center: 1.0, radius: 0.5 };
        assert_eq!(bump.eval(1.0), 1.0);
        assert_eq!(bump.eval(1.6), 0.0);
    }

    #[test]
    fn sampled_reproduces_cubics() {
        let f = |x: f64| 1.0 - x + 0.5 * x * x * x;
        let values = (0..41).map(|i| f(-2.0 + 0.1 * i as f64)).collect();
        let s = BaseFn::sampled(-2.0, 0.1, values).unwrap();
        for &x in &[-1.23, 0.0, 0.456, 1.7] {
            assert!((s.eval(x) - f(x)).abs() < 1e-12);
        }
    }
}
