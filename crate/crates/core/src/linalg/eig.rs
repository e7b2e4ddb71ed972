//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stop once `off(A) ≤ JACOBI_REL_TOL · ‖A‖_F`, after one polishing sweep.
pub const JACOBI_REL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 50;

/// Real values sorted non-increasingly, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum<T>(Vec<T>);

impl<T: Real> Spectrum<T> {
    pub fn from_unsorted(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Self(values)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> T {
        self.0.first().copied().unwrap_or_else(T::zero)
    }

    pub fn smallest(&self) -> T {
        self.0.last().copied().unwrap_or_else(T::zero)
    }

    /// Applies `f` entrywise and re-sorts.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_unsorted(self.0.iter().map(|&x| f(x)).collect())
    }

    pub fn sum(&self) -> T {
        self.0.iter().copied().sum()
    }
}

impl<T> std::ops::Index<usize> for Spectrum<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

/// `A = U diag(values) U*` with `values` non-increasing.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Spectrum<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    /// `U diag(f(λ)) U*` for complex-valued `f`.
    pub fn reconstruct_complex(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.vectors.dim();
        let u = &self.vectors;
        let fvals: Vec<Complex<T>> = self.values.as_slice().iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for (k, fk) in fvals.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            for i in 0..n {
                let uik = u[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + uik * u[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `U diag(f(λ)) U*` for real-valued `f`; the result is Hermitian up to roundoff.
    pub fn reconstruct(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        self.reconstruct_complex(|l| Complex::new(f(l), T::zero())).symmetrized()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Only the Hermitian part of `a` is used. Eigenvalues come back non-increasing;
/// ties are ordered arbitrarily.
pub fn hermitian_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    let n = a.dim();
    let mut w = a.symmetrized();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = w.frobenius_norm();
    let threshold = T::tol(JACOBI_REL_TOL) * scale;

    let mut converged = scale == T::zero() || n == 1;
    let mut sweeps = 0;
    while !converged {
        let off = off_diagonal_norm(&w);
        if off <= threshold {
            // one more sweep costs little (convergence is quadratic) and takes the
            // off-diagonal part from the threshold down to roundoff
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut w, &mut v, p, q);
                }
            }
            converged = true;
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps,
                off_norm: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    debug_assert!(converged);

    let mut pairs: Vec<(T, usize)> = (0..n).map(|i| (w[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, pairs[k].1)]);
    let values = Spectrum(pairs.into_iter().map(|(l, _)| l).collect());
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only, non-increasing.
pub fn hermitian_eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    hermitian_eig(a).map(|e| e.values)
}

/// Eigenvalues of a positive definite matrix with strongly graded diagonal,
/// e.g. `D H D` with `H` well conditioned and `D` spanning many decades.
///
/// Rotations use the relative criterion `|a_pq| > tol·√(a_pp a_qq)`, so small
/// eigenvalues come out with small relative error instead of an error of
/// order `ε‖A‖`. Returns `None` if a diagonal entry is not positive.
pub fn graded_pd_eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Option<Spectrum<T>>> {
    let n = a.dim();
    let mut w = a.symmetrized();
    let mut scratch = ComplexMatrix::<T>::identity(n);
    let tol = T::tol(JACOBI_REL_TOL);
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        if (0..n).any(|i| !(w[(i, i)].re > T::zero())) {
            return Ok(None);
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                if w[(p, q)].norm() > tol * (w[(p, p)].re * w[(q, q)].re).sqrt() {
                    rotate(&mut w, &mut scratch, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            return Ok(Some(Spectrum::from_unsorted((0..n).map(|i| w[(i, i)].re).collect())));
        }
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps: sweep,
                off_norm: off_diagonal_norm(&w).to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    unreachable!()
}

fn off_diagonal_norm<T: Real>(w: &ComplexMatrix<T>) -> T {
    let n = w.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + w[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One two-sided rotation annihilating `w[p][q]`; accumulates into `v`.
///
/// The rotation is `G = D·R` where `D` rotates the phase of `w[p][q]` to the
/// real axis and `R` is the classical real Jacobi rotation.
fn rotate<T: Real>(w: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = w[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let phase = apq / r;
    let phase_c = phase.conj();
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let two = T::lit(2.0);
    let tau = (aqq - app) / (two * r);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let n = w.dim();

    // columns: A <- A G
    for k in 0..n {
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        w[(k, p)] = akp * c - phase_c * akq * s;
        w[(k, q)] = akp * s + phase_c * akq * c;
    }
    // rows: A <- G* A
    for k in 0..n {
        let apk = w[(p, k)];
        let aqk = w[(q, k)];
        w[(p, k)] = apk * c - phase * aqk * s;
        w[(q, k)] = apk * s + phase * aqk * c;
    }
    w[(p, q)] = Complex::zero();
    w[(q, p)] = Complex::zero();
    w[(p, p)].im = T::zero();
    w[(q, q)].im = T::zero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - phase_c * vkq * s;
        v[(k, q)] = vkp * s + phase_c * vkq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn check_decomposition(a: &ComplexMatrix<f64>, e: &Eigen<f64>) {
        let n = a.dim();
        let u = &e.vectors;
        let ortho = (&u.adjoint().matmul(u) - &ComplexMatrix::identity(n)).frobenius_norm();
        assert!(ortho < 1e-12, "orthogonality defect {ortho}");
        let rec = e.reconstruct(|l| l);
        assert!(rec.distance(a) <= 1e-10 * (1.0 + a.frobenius_norm()));
        for w in e.values.as_slice().windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn diagonal_input_is_permuted() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 3.0, 2.0]);
        let e = hermitian_eig(&a).unwrap();
        assert_eq!(e.values.as_slice(), &[3.0, 2.0, 1.0]);
        assert_eq!(e.vectors[(1, 0)].norm(), 1.0);
        assert_eq!(e.vectors[(2, 1)].norm(), 1.0);
        assert_eq!(e.vectors[(0, 2)].norm(), 1.0);
    }

    #[test]
    fn identity_reconstructs() {
        let a = ComplexMatrix::<f64>::identity(4);
        let e = hermitian_eig(&a).unwrap();
        assert!(e.values.as_slice().iter().all(|&l| l == 1.0));
        check_decomposition(&a, &e);
    }

    #[test]
    fn two_by_two_quadratic_formula() {
        // λ² − 4λ + 3 = 0
        let a = ComplexMatrix::from_real_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = hermitian_eig(&a).unwrap();
        let disc: f64 = (16.0f64 - 12.0).sqrt();
        assert!((e.values[0] - (4.0 + disc) / 2.0).abs() < 1e-14);
        assert!((e.values[1] - (4.0 - disc) / 2.0).abs() < 1e-14);
        check_decomposition(&a, &e);
    }

    #[test]
    fn complex_hermitian() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        check_decomposition(&a, &e);
        assert!((e.values.sum() - a.trace().re).abs() < 1e-13);
    }

    #[test]
    fn single_precision() {
        let a = ComplexMatrix::<f32>::from_rows(vec![
            vec![Complex::new(2.0, 0.0), Complex::new(0.0, 1.0)],
            vec![Complex::new(0.0, -1.0), Complex::new(2.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-5);
        assert!((e.values[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn graded_small_eigenvalue() {
        // D H D with H = [[2, 1], [1, 2]] and D = diag(1, 1e-20): det = 3e-40
        let d = [1.0, 1e-20];
        let h = [[2.0, 1.0], [1.0, 2.0]];
        let a = ComplexMatrix::from_fn(2, |i, j| Complex::new(d[i] * h[i][j] * d[j], 0.0));
        let l: Spectrum<f64> = graded_pd_eigenvalues(&a).unwrap().unwrap();
        assert!((l[0] * l[1] / 3e-40 - 1.0).abs() < 1e-12);
        assert!(graded_pd_eigenvalues(&ComplexMatrix::<f64>::zeros(2)).unwrap().is_none());
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::<f64>::zeros(3)).unwrap();
        assert!(e.values.as_slice().iter().all(|&l| l == 0.0));
    }
}
