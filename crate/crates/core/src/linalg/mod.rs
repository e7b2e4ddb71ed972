//! Dense complex linear algebra: Hermitian eigendecomposition, spectral
//! functional calculus, singular values and unitarily invariant norms.

pub mod eig;
pub mod hermitian;
pub mod io;
pub mod matrix;
pub mod norms;
pub mod projection;

pub use eig::{graded_pd_eigenvalues, hermitian_eig, hermitian_eigenvalues, Eigen, Spectrum};
pub use hermitian::{HermitianMatrix, PdMatrix, PsdMatrix, ZeroConvention, ZeroPower, RANK_TOL};
pub use matrix::{determinant, ComplexMatrix};
pub use norms::{ky_fan_products, operator_norm, schatten_norm, singular_values, UnitarilyInvariantNorm};
pub use projection::projection_meet;
