//! Numerics for the smooth convolution algebras of the foliations of the real
//! line generated by `x^k d/dx`.

pub mod coeff_ring;
pub mod error;
pub mod flow;
pub mod groupoid;
pub mod interp;
pub mod jet;
pub mod poly;
pub mod quadrature;
pub mod random;
pub mod series;
pub mod wiener_hopf;

pub use error::{Error, Result};
