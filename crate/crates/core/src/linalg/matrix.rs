use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

/// Dense square complex matrix, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Field> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows, rejecting ragged or empty input.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, row, cols: r.len() });
            }
            data.extend(r);
        }
        Ok(Self { dim, data })
    }

    /// Real matrix from rows.
    pub fn from_real_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| Complex::new(x, T::zero())).collect())
                .collect(),
        )
    }

    pub fn from_real_diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = Complex::new(v.clone(), T::zero());
        }
        m
    }

    pub fn from_diagonal(values: &[Complex<T>]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn trace(&self) -> Complex<T> {
        let mut acc = Complex::zero();
        for i in 0..self.dim {
            acc = acc + self[(i, i)].clone();
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.clone() * s.clone()).collect(),
        }
    }

    pub fn scale_complex(&self, s: &Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.clone() * s.clone()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a.clone() * rhs.data[k * n + j].clone();
                    let slot = &mut out.data[i * n + j];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    /// `self * inner * self^*`.
    pub fn congruence(&self, inner: &Self) -> Self {
        self.matmul(inner).matmul(&self.adjoint())
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.matmul(self);
        }
        out
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Block-diagonal matrix `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a + b, |i, j| {
            if i < a && j < a {
                self[(i, j)].clone()
            } else if i >= a && j >= a {
                other[(i - a, j - a)].clone()
            } else {
                Complex::zero()
            }
        })
    }

    /// Principal-style submatrix with the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Complex<T>>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect())
            .collect()
    }

    /// Weighted sum `Σ w_k M_k` of equally sized matrices.
    pub fn weighted_sum<'a>(terms: impl IntoIterator<Item = (T, &'a Self)>, dim: usize) -> Self
    where
        T: 'a,
    {
        let mut acc = Self::zeros(dim);
        for (w, m) in terms {
            acc = &acc + &m.scale(&w);
        }
        acc
    }

    pub fn map_entries<S>(&self, f: impl Fn(&Complex<T>) -> Complex<S>) -> ComplexMatrix<S> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// First non-finite entry, if any.
    pub fn check_finite(&self) -> Result<()> {
        for (k, z) in self.data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(k / self.dim, k % self.dim));
            }
        }
        Ok(())
    }

    /// `‖A − A*‖_F`.
    pub fn hermitian_defect(&self) -> T {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// `(A + A*) / 2`.
    pub fn symmetrized(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).frobenius_norm()
    }

    pub fn to_f64(&self) -> ComplexMatrix<f64> {
        self.map_entries(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Field> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Field> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Field> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Field> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| -z.clone()).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = &self.data[i * self.dim + j];
                write!(f, "({:?}, {:?}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Determinant by Laplace expansion (k ≤ 4) or LU with partial pivoting.
pub fn determinant<T: Real>(rows: &[Vec<Complex<T>>]) -> Complex<T> {
    let k = rows.len();
    if k <= 4 {
        laplace_det(rows)
    } else {
        lu_det(rows)
    }
}

fn laplace_det<T: Real>(rows: &[Vec<Complex<T>>]) -> Complex<T> {
    match rows.len() {
        0 => Complex::one(),
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        k => {
            let mut acc = Complex::zero();
            for col in 0..k {
                let minor: Vec<Vec<Complex<T>>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, z)| *z).collect())
                    .collect();
                let term = rows[0][col] * laplace_det(&minor);
                if col % 2 == 0 {
                    acc = acc + term;
                } else {
                    acc = acc - term;
                }
            }
            acc
        }
    }
}

fn lu_det<T: Real>(rows: &[Vec<Complex<T>>]) -> Complex<T> {
    let k = rows.len();
    let mut a: Vec<Vec<Complex<T>>> = rows.to_vec();
    let mut det = Complex::<T>::one();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        if a[pivot][col].norm() == T::zero() {
            return Complex::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det = det * p;
        for r in col + 1..k {
            let factor = a[r][col] / p;
            for c in col..k {
                let v = a[col][c];
                a[r][c] = a[r][c] - factor * v;
            }
        }
    }
    det
}
