use num_complex::Complex;

use super::eig::hermitian_eig;
use super::hermitian::PsdMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues of `P + Q` within this distance of 2 span `ran P ∩ ran Q`.
pub const MEET_TOL: f64 = 1e-9;
const IDEMPOTENT_TOL: f64 = 1e-8;

/// Orthogonal projection onto `ran P ∩ ran Q`, read off the eigenvalue-2
/// eigenspace of `P + Q`.
pub fn projection_meet<T: Real>(p: &PsdMatrix<T>, q: &PsdMatrix<T>) -> Result<PsdMatrix<T>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    for (name, m) in [("P", p), ("Q", q)] {
        let defect = (&m.matrix().matmul(m.matrix()) - m.matrix()).frobenius_norm();
        if defect > T::tol(IDEMPOTENT_TOL) * (T::one() + m.matrix().frobenius_norm()) {
            return Err(Error::Precondition(format!(
                "{name} is not an orthogonal projection (‖P²−P‖_F = {:e})",
                defect.to_f64_lossy()
            )));
        }
    }
    let sum = p.matrix() + q.matrix();
    let e = hermitian_eig(&sum)?;
    let cut = T::lit(2.0) - T::tol(MEET_TOL);
    let proj = e.reconstruct_complex(|l| {
        if l >= cut {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    PsdMatrix::from_product(&proj)
}
