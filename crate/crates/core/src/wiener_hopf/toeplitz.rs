//! Finite sections `(f̂(j−k))_{0 ≤ j,k < N}` of Toeplitz operators.
//!
//! Kernel counts of a finite section are a diagnostic only: the section of
//! the unilateral shift has a one-dimensional kernel and cokernel at every
//! size although the shift itself is injective.

use super::symbol::{LoopDomain, SymbolLoop};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSection {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
    pub provenance: String,
}

/// `f̂(m) = (1/M) Σ_j f(z_j) z_j^{−m}`, indexed by `m mod M`.
pub fn circle_fourier_coefficients(symbol: &SymbolLoop) -> Result<Vec<Complex64>> {
    if symbol.domain() != LoopDomain::Circle {
        return Err(Error::InvalidArgument("Fourier coefficients need a circle-sampled loop".into()));
    }
    let mut buf = symbol.values().to_vec();
    let m = buf.len();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    Ok(buf.into_iter().map(|v| v / m as f64).collect())
}

pub fn toeplitz_finite_section(symbol: &SymbolLoop, n: usize) -> Result<FiniteSection> {
    if n == 0 {
        return Err(Error::InvalidArgument("finite section size must be positive".into()));
    }
    let coeffs = circle_fourier_coefficients(symbol)?;
    let m = coeffs.len();
    if 2 * n - 1 > m {
        return Err(Error::InvalidArgument(format!(
            "{m} samples cannot resolve the {} Fourier modes of a size-{n} section",
            2 * n - 1
        )));
    }
    let matrix = DMatrix::from_fn(n, n, |j, k| coeffs[(j as i64 - k as i64).rem_euclid(m as i64) as usize]);
    Ok(FiniteSection { n, matrix, provenance: format!("{}: {m} circle samples, section {n}", symbol.label()) })
}

/// Singular values below `tol` of the section and of its adjoint.
pub fn finite_section_kernel_counts(section: &FiniteSection, tol: f64) -> (usize, usize) {
    let count = |m: DMatrix<Complex64>| m.singular_values().iter().filter(|&&s| s < tol).count();
    (count(section.matrix.clone()), count(section.matrix.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_and_shift() {
        let one = SymbolLoop::circle_from_fn(32, |_| c(1.0)).unwrap();
        let s = toeplitz_finite_section(&one, 8).unwrap();
        assert!((&s.matrix - DMatrix::identity(8, 8)).norm() < 1e-14);
        assert_eq!(finite_section_kernel_counts(&s, 1e-10), (0, 0));

        let z = SymbolLoop::circle_from_fn(128, |z| z).unwrap();
        let s = toeplitz_finite_section(&z, 50).unwrap();
        for j in 0..50 {
            for k in 0..50 {
                let expect = if j == k + 1 { 1.0 } else { 0.0 };
                assert!((s.matrix[(j, k)] - c(expect)).norm() < 1e-14);
            }
        }
        assert_eq!(finite_section_kernel_counts(&s, 1e-10), (1, 1));
    }

    #[test]
    fn invertible_symbols_have_trivial_sections() {
        let sym = SymbolLoop::circle_from_fn(64, |z| z + 2.0).unwrap();
        let s = toeplitz_finite_section(&sym, 20).unwrap();
        assert_eq!(finite_section_kernel_counts(&s, 1e-10), (0, 0));
        let gen = SymbolLoop::circle_from_fn(64, |z| c(1.0) - z).unwrap();
        let s = toeplitz_finite_section(&gen, 4).unwrap();
        assert!((s.matrix[(1, 0)] + c(1.0)).norm() < 1e-14 && (s.matrix[(2, 2)] - c(1.0)).norm() < 1e-14);
        assert!(s.matrix[(2, 0)].norm() < 1e-14 && s.matrix[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn too_few_samples() {
        let z = SymbolLoop::circle_from_fn(16, |z| z).unwrap();
        assert!(toeplitz_finite_section(&z, 9).is_err());
        assert!(toeplitz_finite_section(&z, 0).is_err());
    }
}
