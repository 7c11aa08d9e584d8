//! Gauss-Legendre rules and composite integrators.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| f(mid + half * x) * *w)
            .sum::<Complex64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre on `[a, b]` split into `panels` equal pieces.
pub fn composite<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &mut f))
        .sum()
}

pub fn composite_complex<F: FnMut(f64) -> Complex64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> Complex64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| rule.integrate_complex(a + i as f64 * h, a + (i + 1) as f64 * h, &mut f))
        .sum()
}

/// Integral over the whole line of a function decaying at least like `1/t^2`.
///
/// The core `[-cut, cut]` is integrated with composite Gauss-Legendre panels and
/// each tail is mapped onto `[0, 1/cut]` through `t = ±1/u`, where the integrand
/// `f(±1/u)/u^2` stays bounded.
pub fn integrate_line_complex<F: FnMut(f64) -> Complex64>(cut: f64, panels: usize, mut f: F) -> Complex64 {
    let rule = GaussLegendre::new(20);
    let core = composite_complex(&rule, -cut, cut, panels, &mut f);
    let tail_panels = 8;
    let upper = composite_complex(&rule, 0.0, 1.0 / cut, tail_panels, |u| {
        if u == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(1.0 / u) / (u * u)
        }
    });
    let lower = composite_complex(&rule, 0.0, 1.0 / cut, tail_panels, |u| {
        if u == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(-1.0 / u) / (u * u)
        }
    });
    core + upper + lower
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(8);
        let w: f64 = gl.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // degree 15 is the limit of exactness for 8 nodes
        let v = gl.integrate(-1.0, 1.0, |x| x.powi(14));
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let gl = GaussLegendre::new(16);
        let v = composite(&gl, -12.0, 12.0, 24, |x| (-x * x / 2.0).exp());
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn line_integral_with_algebraic_tails() {
        let v = integrate_line_complex(10.0, 80, |t| Complex64::new(1.0 / (1.0 + t * t), 0.0));
        assert!((v.re - PI).abs() < 1e-12, "{}", v.re);
    }
}
