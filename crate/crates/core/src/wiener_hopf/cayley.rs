//! The phase-corrected Cayley unitary `(Wξ)(t) = √2/(t+i) · ξ(w(t))`,
//! `w(t) = (t−i)/(t+i)`.

use crate::quadrature::integrate_line_complex;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

pub fn cayley(t: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    (t - i) / (t + i)
}

/// Image of the basis vector `z^n/√(2π)`, that is `(1/√π) w(t)^n/(t+i)`.
///
/// For `n ≥ 0` these span the Hardy space of the upper half-plane; for
/// `n = −(m+1)` the same formula reads `(1/√π)((t+i)/(t−i))^m/(t−i)`.
pub fn cayley_basis_image(n: i64, t: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    cayley(t).powi(n as i32) / (t + i) / PI.sqrt()
}

/// `⟨e_m, e_n⟩ = ∫ conj(e_m) e_n dt` for the listed indices. The tails beyond
/// `|t| = cut` are integrated exactly after `t = ±1/u`.
pub fn cayley_gram(indices: &[i64], cut: f64, panels: usize) -> DMatrix<Complex64> {
    let n = indices.len();
    DMatrix::from_fn(n, n, |a, b| {
        let (m, k) = (indices[a], indices[b]);
        integrate_line_complex(cut, panels, |t| cayley_basis_image(m, t).conj() * cayley_basis_image(k, t))
    })
}

/// Largest entrywise deviation from the identity.
pub fn gram_defect(gram: &DMatrix<Complex64>) -> f64 {
    let n = gram.nrows();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..gram.ncols() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((gram[(a, b)] - target).norm());
        }
    }
    worst
}
