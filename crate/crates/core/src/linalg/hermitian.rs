//! Hermitian, positive semidefinite and positive definite wrappers with
//! spectral functional calculus.
//!
//! All "support" semantics (kernel detection, support projections, generalized
//! inverses and powers) hinge on [`RANK_TOL`]: an eigenvalue `λ` of a PSD matrix
//! is treated as zero when `λ ≤ RANK_TOL · λ_1`.

use std::ops::Deref;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::eig::{hermitian_eig, Eigen, Spectrum};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative Hermitian defect accepted on construction: `‖A − A*‖_F ≤ tol·(1 + ‖A‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Negative eigenvalues down to `−PSD_TOL · max(1, λ_1)` are accepted as roundoff.
pub const PSD_TOL: f64 = 1e-10;
/// Kernel cut relative to the largest eigenvalue.
pub const RANK_TOL: f64 = 1e-12;

/// Value assigned to kernel eigenvalues by [`PsdMatrix::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroConvention {
    /// `f(0) := 0`, i.e. `f` acts on the support only.
    Vanish,
    /// Evaluate `f(0)`; an infinite or NaN value is a domain error.
    Evaluate,
}

/// Meaning of a zeroth power, for matrices (`A^0`) and scalars (`0^0`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroPower {
    /// `A^0 := I` and `0^0 := 1`.
    #[default]
    Identity,
    /// `A^0 :=` support projection of `A` and `0^0 := 0`.
    Support,
}

impl ZeroPower {
    /// Scalar `x^e` for `x ≥ 0` under this convention; `0^e = 0` for `e ≠ 0`.
    pub fn scalar_pow<T: Real>(self, x: T, e: T) -> T {
        if e == T::zero() {
            match self {
                ZeroPower::Identity => T::one(),
                ZeroPower::Support => {
                    if x > T::zero() {
                        T::one()
                    } else {
                        T::zero()
                    }
                }
            }
        } else if x <= T::zero() {
            T::zero()
        } else {
            x.powf(e)
        }
    }
}

/// Hermitian matrix; exactly self-adjoint after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T>(ComplexMatrix<T>);

impl<T: Real> HermitianMatrix<T> {
    /// Validates near-Hermiticity and symmetrizes.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        m.check_finite()?;
        let defect = m.hermitian_defect();
        let allowed = T::tol(HERMITIAN_TOL) * (T::one() + m.frobenius_norm());
        if defect > allowed {
            return Err(Error::NotHermitian {
                defect: defect.to_f64_lossy(),
                allowed: allowed.to_f64_lossy(),
            });
        }
        Ok(Self(m.symmetrized()))
    }

    /// Takes the Hermitian part of an arithmetic result without validation.
    pub fn from_symmetrized(m: &ComplexMatrix<T>) -> Self {
        Self(m.symmetrized())
    }

    pub fn from_real_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn from_real_diagonal(values: &[T]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(values))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> T {
        self.0.trace().re
    }

    pub fn eig(&self) -> Result<Eigen<T>> {
        hermitian_eig(&self.0)
    }

    pub fn eigenvalues(&self) -> Result<Spectrum<T>> {
        Ok(self.eig()?.values)
    }

    /// `U f(diag λ) U*`; fails if `f` is not finite on the spectrum.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let e = self.eig()?;
        check_domain(e.values.as_slice(), &f)?;
        Ok(Self(e.reconstruct(f)))
    }

    /// Matrix exponential, positive definite by construction.
    pub fn exp(&self) -> Result<PdMatrix<T>> {
        let e = self.eig()?;
        let values: Vec<T> = e.values.as_slice().iter().map(|&l| l.exp()).collect();
        let psd = PsdMatrix::from_eigen_parts(values, e.vectors);
        PdMatrix::new(psd)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(&s))
    }

    /// `Σ w_k H_k`.
    pub fn weighted_sum<'a>(terms: impl IntoIterator<Item = (T, &'a Self)>, dim: usize) -> Self
    where
        T: 'a,
    {
        Self(ComplexMatrix::weighted_sum(terms.into_iter().map(|(w, h)| (w, &h.0)), dim))
    }
}

fn check_domain<T: Real>(values: &[T], f: &impl Fn(T) -> T) -> Result<()> {
    for &l in values {
        if !f(l).is_finite() {
            return Err(Error::Domain { eigenvalue: l.to_f64_lossy() });
        }
    }
    Ok(())
}

/// Positive semidefinite matrix with a cached eigendecomposition.
///
/// Stored eigenvalues are non-increasing and clamped at zero.
#[derive(Clone, Debug)]
pub struct PsdMatrix<T> {
    matrix: HermitianMatrix<T>,
    eigen: Eigen<T>,
}

impl<T: Real> PsdMatrix<T> {
    pub fn new(h: HermitianMatrix<T>) -> Result<Self> {
        let mut eigen = h.eig()?;
        let top = eigen.values.largest().max(T::zero());
        let min = eigen.values.smallest();
        if min < -T::tol(PSD_TOL) * top.max(T::one()) {
            return Err(Error::NotPsd { min_eigenvalue: min.to_f64_lossy() });
        }
        eigen.values = eigen.values.map(|l| l.max(T::zero()));
        Ok(Self { matrix: h, eigen })
    }

    pub fn from_matrix(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_real_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_rows(rows)?)
    }

    pub fn from_real_diagonal(values: &[T]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(values))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_eigen_parts(vec![T::one(); dim], ComplexMatrix::identity(dim))
    }

    /// Assembles `U diag(values) U*` from non-negative `values` in any order.
    pub(crate) fn from_eigen_parts(values: Vec<T>, vectors: ComplexMatrix<T>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
        let vectors = ComplexMatrix::from_fn(n, |i, k| vectors[(i, order[k])]);
        let sorted: Vec<T> = order.iter().map(|&k| values[k].max(T::zero())).collect();
        let eigen = Eigen {
            values: Spectrum::from_unsorted(sorted),
            vectors,
        };
        let matrix = HermitianMatrix(eigen.reconstruct(|l| l));
        Self { matrix, eigen }
    }

    /// Re-diagonalizes an arithmetic result `m` that should be PSD.
    pub fn from_product(m: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::from_symmetrized(m))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.matrix.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn eigen(&self) -> &Eigen<T> {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace()
    }

    /// Eigenvalues at or below this value are treated as kernel.
    pub fn kernel_threshold(&self) -> T {
        T::tol(RANK_TOL) * self.eigen.values.largest()
    }

    fn in_kernel(&self, l: T) -> bool {
        l <= self.kernel_threshold()
    }

    /// Eigenvalues, non-increasing, with kernel eigenvalues set to exactly zero.
    pub fn spectrum(&self) -> Spectrum<T> {
        let thr = self.kernel_threshold();
        Spectrum::from_unsorted(
            self.eigen.values.as_slice().iter().map(|&l| if l <= thr { T::zero() } else { l }).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.eigen.values.as_slice().iter().filter(|&&l| !self.in_kernel(l)).count()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.rank() == self.dim()
    }

    fn map_psd(&self, f: impl Fn(T) -> T) -> Self {
        let values = self.eigen.values.as_slice().iter().map(|&l| f(l).max(T::zero())).collect();
        Self::from_eigen_parts(values, self.eigen.vectors.clone())
    }

    /// General functional calculus `U f(diag λ) U*` with the given kernel convention.
    pub fn apply(&self, f: impl Fn(T) -> T, conv: ZeroConvention) -> Result<HermitianMatrix<T>> {
        let mut values = Vec::with_capacity(self.dim());
        for &l in self.eigen.values.as_slice() {
            let v = if self.in_kernel(l) {
                match conv {
                    ZeroConvention::Vanish => T::zero(),
                    ZeroConvention::Evaluate => f(T::zero()),
                }
            } else {
                f(l)
            };
            if !v.is_finite() {
                let at = if self.in_kernel(l) { T::zero() } else { l };
                return Err(Error::Domain { eigenvalue: at.to_f64_lossy() });
            }
            values.push(v);
        }
        // values stay paired with their own eigenvectors; no re-sort needed
        let n = self.dim();
        let u = &self.eigen.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &v) in values.iter().enumerate() {
            if v == T::zero() {
                continue;
            }
            for i in 0..n {
                let uik = u[(i, k)] * v;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + uik * u[(j, k)].conj();
                }
            }
        }
        Ok(HermitianMatrix::from_symmetrized(&out))
    }

    /// Generalized power: acts on the support, `0^p := 0`, and `A^0` is the
    /// support projection. Negative `p` inverts on the support.
    pub fn pow(&self, p: T) -> Self {
        let thr = self.kernel_threshold();
        self.map_psd(|l| {
            if l <= thr {
                T::zero()
            } else if p == T::zero() {
                T::one()
            } else {
                l.powf(p)
            }
        })
    }

    /// Power with an explicit convention for the zeroth power.
    pub fn pow_with(&self, p: T, conv: ZeroPower) -> Self {
        if p == T::zero() && conv == ZeroPower::Identity {
            Self::identity(self.dim())
        } else {
            self.pow(p)
        }
    }

    pub fn sqrt(&self) -> Self {
        self.pow(T::lit(0.5))
    }

    /// Logarithm on the support; zero on the kernel.
    pub fn log_on_support(&self) -> HermitianMatrix<T> {
        self.apply(|l| l.ln(), ZeroConvention::Vanish)
            .expect("log is finite on the support")
    }

    /// `U diag(λ^z) U*` with `0^z := 0`.
    pub fn complex_power(&self, z: Complex<T>) -> ComplexMatrix<T> {
        let thr = self.kernel_threshold();
        self.eigen.reconstruct_complex(|l| {
            if l <= thr {
                Complex::new(T::zero(), T::zero())
            } else {
                (z * l.ln()).exp()
            }
        })
    }

    /// Orthogonal projection onto the range.
    pub fn support_projection(&self) -> Self {
        self.pow(T::zero())
    }

    /// Inverse restricted to the support.
    pub fn generalized_inverse(&self) -> Self {
        self.pow(-T::one())
    }

    /// `outer · self · outer*`, re-diagonalized.
    pub fn congruence(&self, outer: &ComplexMatrix<T>) -> Result<Self> {
        Self::from_product(&outer.congruence(self.matrix()))
    }
}

/// Positive definite matrix: a [`PsdMatrix`] with trivial kernel.
#[derive(Clone, Debug)]
pub struct PdMatrix<T>(PsdMatrix<T>);

impl<T: Real> PdMatrix<T> {
    pub fn new(psd: PsdMatrix<T>) -> Result<Self> {
        if !psd.is_positive_definite() {
            return Err(Error::Singular {
                min_eigenvalue: psd.eigen.values.smallest().to_f64_lossy(),
                threshold: psd.kernel_threshold().to_f64_lossy(),
            });
        }
        Ok(Self(psd))
    }

    pub fn from_matrix(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(PsdMatrix::from_matrix(m)?)
    }

    pub fn from_real_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(PsdMatrix::from_real_rows(rows)?)
    }

    pub fn from_real_diagonal(values: &[T]) -> Result<Self> {
        Self::new(PsdMatrix::from_real_diagonal(values)?)
    }

    pub fn from_product(m: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(PsdMatrix::from_product(m)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self(PsdMatrix::identity(dim))
    }

    pub fn as_psd(&self) -> &PsdMatrix<T> {
        &self.0
    }

    pub fn into_psd(self) -> PsdMatrix<T> {
        self.0
    }

    pub fn pow(&self, p: T) -> Self {
        if p == T::zero() {
            return Self::identity(self.dim());
        }
        Self(self.0.map_psd(|l| l.powf(p)))
    }

    pub fn sqrt(&self) -> Self {
        self.pow(T::lit(0.5))
    }

    pub fn inv(&self) -> Self {
        self.pow(-T::one())
    }

    pub fn inv_sqrt(&self) -> Self {
        self.pow(T::lit(-0.5))
    }

    pub fn log(&self) -> HermitianMatrix<T> {
        self.0.log_on_support()
    }

    /// `λ_1 / λ_m`.
    pub fn condition_number(&self) -> T {
        self.0.eigen.values.largest() / self.0.eigen.values.smallest()
    }

    /// `outer · self · outer*` for invertible `outer`.
    pub fn congruence(&self, outer: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(self.0.congruence(outer)?)
    }
}

impl<T> Deref for PdMatrix<T> {
    type Target = PsdMatrix<T>;
    fn deref(&self) -> &PsdMatrix<T> {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn close(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(vec![vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_indefinite() {
        let m = ComplexMatrix::from_real_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(PsdMatrix::from_matrix(m), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn square_root_of_diagonal() {
        let a = PsdMatrix::from_real_diagonal(&[4.0, 9.0]).unwrap();
        let r = a.sqrt();
        assert!(close(r.matrix(), &ComplexMatrix::from_real_diagonal(&[2.0, 3.0]), 1e-14));
    }

    #[test]
    fn log_with_vanishing_kernel() {
        let a = PsdMatrix::from_real_diagonal(&[E, 0.0]).unwrap();
        let l = a.apply(|x| x.ln(), ZeroConvention::Vanish).unwrap();
        assert!(close(l.matrix(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), 1e-14));
        let err = a.apply(|x| x.ln(), ZeroConvention::Evaluate).unwrap_err();
        assert_eq!(err, Error::Domain { eigenvalue: 0.0 });
    }

    #[test]
    fn generalized_inverse() {
        let a = PsdMatrix::from_real_diagonal(&[2.0, 0.0]).unwrap();
        let g = a.pow(-1.0);
        assert!(close(g.matrix(), &ComplexMatrix::from_real_diagonal(&[0.5, 0.0]), 1e-15));
        assert!(close(a.generalized_inverse().matrix(), g.matrix(), 0.0));
    }

    #[test]
    fn complex_powers() {
        let i = PsdMatrix::<f64>::identity(3);
        let z = Complex::new(1.0, 0.7);
        assert!(close(&i.complex_power(z), &ComplexMatrix::identity(3), 1e-15));

        let a = PsdMatrix::from_real_diagonal(&[4.0, 0.0]).unwrap();
        let p = a.complex_power(Complex::new(1.0, 0.0));
        assert!(close(&p, &ComplexMatrix::from_real_diagonal(&[4.0, 0.0]), 1e-14));

        let e = PsdMatrix::from_real_diagonal(&[E]).unwrap();
        let p = e.complex_power(Complex::new(0.0, 1.0));
        assert!((p[(0, 0)] - Complex::new(1f64.cos(), 1f64.sin())).norm() < 1e-15);
    }

    #[test]
    fn imaginary_power_is_unitary() {
        let a = PdMatrix::from_real_rows(vec![vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let u = a.complex_power(Complex::new(0.0, 1.3));
        let defect = (&u.adjoint().matmul(&u) - &ComplexMatrix::identity(2)).frobenius_norm();
        assert!(defect < 1e-14);
    }

    #[test]
    fn support_projections() {
        let a = PsdMatrix::from_real_diagonal(&[2.0, 0.0]).unwrap();
        assert!(close(a.support_projection().matrix(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), 0.0));

        let pd = PsdMatrix::from_real_rows(vec![vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(close(pd.support_projection().matrix(), &ComplexMatrix::identity(2), 1e-14));

        // rank one v v* with unit v
        let s = 0.5f64.sqrt();
        let v = [Complex::new(s, 0.0), Complex::new(0.0, s)];
        let vv = ComplexMatrix::from_fn(2, |i, j| v[i] * v[j].conj());
        let p = PsdMatrix::from_matrix(vv.clone()).unwrap().support_projection();
        assert!(close(p.matrix(), &vv, 1e-14));
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn zero_power_conventions() {
        assert_eq!(ZeroPower::Identity.scalar_pow(0.0, 0.0), 1.0);
        assert_eq!(ZeroPower::Support.scalar_pow(0.0, 0.0), 0.0);
        assert_eq!(ZeroPower::Support.scalar_pow(2.0, 0.0), 1.0);
        assert_eq!(ZeroPower::Identity.scalar_pow(0.0, 0.5), 0.0);
        let a = PsdMatrix::from_real_diagonal(&[3.0, 0.0]).unwrap();
        assert!(close(a.pow_with(0.0, ZeroPower::Identity).matrix(), &ComplexMatrix::identity(2), 0.0));
        assert!(close(
            a.pow_with(0.0, ZeroPower::Support).matrix(),
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
            0.0
        ));
    }

    #[test]
    fn exp_and_log_invert() {
        let h = HermitianMatrix::from_real_rows(vec![vec![0.3, -0.2], vec![-0.2, -1.0]]).unwrap();
        let e = h.exp().unwrap();
        assert!(close(e.log().matrix(), h.matrix(), 1e-13));
    }

    #[test]
    fn singular_pd_rejected() {
        assert!(matches!(PdMatrix::from_real_diagonal(&[1.0, 0.0]), Err(Error::Singular { .. })));
    }
}
