//! Singular values and unitarily invariant norms.

use serde::{Deserialize, Serialize};

use super::eig::{hermitian_eigenvalues, Spectrum};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `s(X)`, non-increasing, computed as `λ(X*X)^{1/2}`.
pub fn singular_values<T: Real>(x: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    let gram = x.adjoint().matmul(x);
    let l = hermitian_eigenvalues(&gram)?;
    Ok(l.map(|v| v.max(T::zero()).sqrt()))
}

/// A unitarily invariant norm, evaluated through singular values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "kebab-case")]
pub enum UnitarilyInvariantNorm {
    /// Schatten `p`-norm, `1 ≤ p < ∞`.
    Schatten(f64),
    /// Operator (spectral) norm `s_1`.
    Operator,
    /// Ky Fan `k`-norm `s_1 + … + s_k`.
    KyFan(usize),
}

impl UnitarilyInvariantNorm {
    pub const TRACE: Self = Self::Schatten(1.0);
    pub const FROBENIUS: Self = Self::Schatten(2.0);

    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Schatten(p) if !(p >= 1.0 && p.is_finite()) => {
                Err(Error::InvalidParameter(format!("Schatten exponent must be in [1, ∞), got {p}")))
            }
            Self::KyFan(0) => Err(Error::InvalidParameter("Ky Fan index must be ≥ 1".into())),
            n => Ok(n),
        }
    }

    /// `A ≤ B` and `‖A‖ = ‖B‖` force `A = B`. True for Schatten norms with finite exponent.
    pub fn is_strictly_increasing(self) -> bool {
        matches!(self, Self::Schatten(p) if p.is_finite())
    }

    /// Norm of a matrix whose singular values are `s` (any order, non-negative).
    pub fn of_singular_values<T: Real>(self, s: &[T]) -> T {
        match self {
            Self::Schatten(p) => {
                let p = T::lit(p);
                let top = s.iter().copied().fold(T::zero(), T::max);
                if top == T::zero() {
                    return T::zero();
                }
                // scale to avoid overflow for large p
                let sum: T = s.iter().map(|&v| (v / top).powf(p)).sum();
                top * sum.powf(T::one() / p)
            }
            Self::Operator => s.iter().copied().fold(T::zero(), T::max),
            Self::KyFan(k) => {
                let sorted = Spectrum::from_unsorted(s.to_vec());
                sorted.as_slice().iter().take(k).copied().sum()
            }
        }
    }

    pub fn of<T: Real>(self, x: &ComplexMatrix<T>) -> Result<T> {
        let s = singular_values(x)?;
        Ok(self.of_singular_values(s.as_slice()))
    }

    /// `‖ |X|^r ‖`.
    pub fn of_abs_power<T: Real>(self, x: &ComplexMatrix<T>, r: T) -> Result<T> {
        let s = singular_values(x)?;
        let sr: Vec<T> = s.as_slice().iter().map(|&v| if v > T::zero() { v.powf(r) } else { T::zero() }).collect();
        Ok(self.of_singular_values(&sr))
    }
}

/// `‖X‖_p`; `p = ∞` gives the operator norm. `p < 1` is rejected.
pub fn schatten_norm<T: Real>(x: &ComplexMatrix<T>, p: f64) -> Result<T> {
    if p == f64::INFINITY {
        return operator_norm(x);
    }
    UnitarilyInvariantNorm::Schatten(p).validate()?.of(x)
}

pub fn operator_norm<T: Real>(x: &ComplexMatrix<T>) -> Result<T> {
    Ok(singular_values(x)?.largest())
}

/// `(∏_{i ≤ k} s_i(X))_{k = 1..m}`.
pub fn ky_fan_products<T: Real>(x: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let s = singular_values(x)?;
    let mut acc = T::one();
    Ok(s.as_slice()
        .iter()
        .map(|&v| {
            acc = acc * v;
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn unitary_singular_values() {
        let s = 0.5f64.sqrt();
        let u = ComplexMatrix::from_rows(vec![
            vec![Complex::new(s, 0.0), Complex::new(0.0, s)],
            vec![Complex::new(0.0, s), Complex::new(s, 0.0)],
        ])
        .unwrap();
        let sv = singular_values(&u).unwrap();
        assert!(sv.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn diagonal_singular_values() {
        let d = ComplexMatrix::from_real_diagonal(&[-3.0, 2.0]);
        assert_eq!(singular_values(&d).unwrap().as_slice(), &[3.0, 2.0]);
    }

    #[test]
    fn nilpotent_singular_values() {
        let x = ComplexMatrix::<f64>::from_real_rows(vec![vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let s = singular_values(&x).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-15 && s[1].abs() < 1e-15);
    }

    #[test]
    fn named_norms() {
        let i3 = ComplexMatrix::<f64>::identity(3);
        assert!((schatten_norm(&i3, 1.0).unwrap() - 3.0).abs() < 1e-14);
        let d = ComplexMatrix::<f64>::from_real_diagonal(&[3.0, 4.0]);
        assert!((schatten_norm(&d, 2.0).unwrap() - 5.0).abs() < 1e-14);
        let j = ComplexMatrix::from_real_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((operator_norm(&j).unwrap() - golden).abs() < 1e-14);
        assert!((schatten_norm(&j, f64::INFINITY).unwrap() - golden).abs() < 1e-14);
        assert!(schatten_norm(&j, 0.5).is_err());
    }

    #[test]
    fn ky_fan() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -4.0, 2.0]);
        let p = ky_fan_products(&d).unwrap();
        assert_eq!(p, vec![4.0, 8.0, 8.0]);
        assert_eq!(UnitarilyInvariantNorm::KyFan(2).of(&d).unwrap(), 6.0);
        assert!(!UnitarilyInvariantNorm::Operator.is_strictly_increasing());
        assert!(UnitarilyInvariantNorm::TRACE.is_strictly_increasing());
    }
}
