//! Log-majorization and matrix-mean toolkit for dense complex matrices.
//!
//! The crate checks eigenvalue and singular-value inequalities numerically:
//! Araki-type log-majorizations, α-z-Rényi divergences, multivariate
//! Golden–Thompson bounds, Karcher means and the Taylor expansion of the
//! Karcher mean along one-parameter groups. Everything is generic over the
//! scalar type; the aliases at the crate root fix it to `f64`.

pub mod divergence;
pub mod error;
pub mod expansion;
pub mod linalg;
pub mod majorization;
pub mod means;
pub mod golden_thompson;
pub mod quadrature;
pub mod random;
pub mod scalar;
mod serde_ext;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

pub use num_complex::Complex;
pub use num_rational::BigRational;

/// `f64` dense complex matrix.
pub type Matrix = linalg::ComplexMatrix<f64>;
/// `f64` Hermitian matrix.
pub type Hermitian = linalg::HermitianMatrix<f64>;
/// `f64` positive semidefinite matrix.
pub type Psd = linalg::PsdMatrix<f64>;
/// `f64` positive definite matrix.
pub type Pd = linalg::PdMatrix<f64>;
/// Exact rational complex matrix.
pub type ExactMatrix = linalg::ComplexMatrix<BigRational>;
pub type C64 = Complex<f64>;
