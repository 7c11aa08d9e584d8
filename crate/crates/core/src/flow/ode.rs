//! Adaptive Dormand-Prince 5(4) integration of small autonomous systems.

use crate::error::{Error, Result};

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-10, atol: 1e-14 }
    }
}

/// Integrates `y' = f(y)` from time `0` to `span` (either sign).
pub fn integrate<const N: usize, F>(f: F, y0: [f64; N], span: f64, tol: Tolerance) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let total = span.abs();
    let mut y = y0;
    let mut done = 0.0;
    let mut h = (total / 16.0).min(0.05);
    let mut steps = 0usize;
    while done < total {
        if steps > 1_000_000 {
            return Err(Error::InvalidArgument("ODE integration did not finish".into()));
        }
        steps += 1;
        let last = h >= total - done;
        let step = if last { total - done } else { h };
        let mut k = [[0.0; N]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += dir * step * a * kj[i];
                    }
                }
            }
            k[s] = f(&ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += dir * step * d5;
            let sc = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((step * (d5 - d4)).abs() / sc);
        }
        if !y5.iter().all(|v| v.is_finite()) {
            h = step * 0.25;
            if h < 1e-14 {
                return Err(Error::InvalidArgument("ODE solution blew up".into()));
            }
            continue;
        }
        if err <= 1.0 {
            y = y5;
            done = if last { total } else { done + step };
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = step * factor;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let y = integrate(|y: &[f64; 1]| [y[0]], [1.0], 2.0, Tolerance::default()).unwrap();
        assert!((y[0] - 2f64.exp()).abs() < 1e-9 * 2f64.exp());
        let y = integrate(|y: &[f64; 1]| [y[0]], [1.0], -1.5, Tolerance::default()).unwrap();
        assert!((y[0] - (-1.5f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn riccati_matches_closed_form() {
        // x' = x^2, x(0) = 0.5  =>  x(t) = 0.5 / (1 - 0.5 t)
        let y = integrate(|y: &[f64; 1]| [y[0] * y[0]], [0.5], 1.0, Tolerance::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9);
    }
}
