//! Seeded random ensembles of PSD matrices.
//!
//! Every generator takes an explicit [`Rng`], so suites can hand each case its
//! own stream from [`case_rng`] and get identical inputs whether cases run
//! serially or in parallel.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix};
use crate::scalar::Real;

/// Diagonal shift `μ` in the PD ensemble `G*G + μI`.
pub const PD_SHIFT: f64 = 1e-3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-case random stream.
pub type CaseRng = ChaCha8Rng;

/// Independent stream for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Matrix with i.i.d. standard complex Gaussian entries (`E|g|² = 1`).
pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(m, |_, _| Complex::new(T::lit(s * normal(rng)), T::lit(s * normal(rng))))
}

/// Haar-distributed unitary: Gram–Schmidt on a Gaussian matrix, which fixes
/// the phases of the triangular factor to be positive.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix<T> {
    loop {
        let g = gaussian_matrix::<T, R>(m, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Modified Gram–Schmidt, run twice; `None` on (numerically) dependent columns.
fn orthonormalize_columns<T: Real>(g: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let m = g.dim();
    let mut cols: Vec<Vec<Complex<T>>> = (0..m).map(|j| (0..m).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..m {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: Complex<T> = done[k].iter().zip(rest[0].iter()).map(|(q, v)| q.conj() * v).sum();
                for (v, q) in rest[0].iter_mut().zip(done[k].iter()) {
                    *v = *v - *q * proj;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::tol(1e-8) {
            return None;
        }
        for v in cols[j].iter_mut() {
            *v = *v / norm;
        }
    }
    Some(ComplexMatrix::from_fn(m, |i, j| cols[j][i]))
}

/// `U diag(values) U*` for a unitary `u`.
pub fn with_spectrum<T: Real>(u: &ComplexMatrix<T>, values: &[T]) -> ComplexMatrix<T> {
    u.congruence(&ComplexMatrix::from_real_diagonal(values))
}

/// Random Hermitian matrix with eigenvalues uniform in `[lo, hi]` and Haar eigenvectors.
pub fn hermitian_in_range<T: Real, R: Rng + ?Sized>(m: usize, lo: f64, hi: f64, rng: &mut R) -> HermitianMatrix<T> {
    let u = haar_unitary::<T, R>(m, rng);
    let values: Vec<T> = (0..m).map(|_| T::lit(rng.random_range(lo..=hi))).collect();
    HermitianMatrix::from_symmetrized(&with_spectrum(&u, &values))
}

/// `G*G/m + μI` with Gaussian `G`.
pub fn random_pd<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> PdMatrix<T> {
    let g = gaussian_matrix::<T, R>(m, rng);
    let gram = g.adjoint().matmul(&g).scale(&T::lit(1.0 / m as f64));
    let shifted = &gram + &ComplexMatrix::identity(m).scale(&T::lit(PD_SHIFT));
    PdMatrix::from_product(&shifted).expect("shifted Gram matrix is positive definite")
}

/// `U diag(e^{x_i}) U*` with `x_i` uniform in `[−radius, radius]`; condition
/// number at most `e^{2·radius}`.
pub fn log_uniform_pd<T: Real, R: Rng + ?Sized>(m: usize, radius: f64, rng: &mut R) -> PdMatrix<T> {
    let h = hermitian_in_range::<T, R>(m, -radius, radius, rng);
    h.exp().expect("exponential of a Hermitian matrix")
}

/// `P(G*G/m + μI)P` with `P` a Haar-random rank-`r` projection; rank exactly `r`.
pub fn random_psd_rank<T: Real, R: Rng + ?Sized>(m: usize, r: usize, rng: &mut R) -> PsdMatrix<T> {
    let u = haar_unitary::<T, R>(m, rng);
    let diag: Vec<T> = (0..m).map(|i| if i < r { T::one() } else { T::zero() }).collect();
    let p = with_spectrum(&u, &diag);
    let inner = random_pd::<T, R>(m, rng);
    // restrict to range(P) before sandwiching so the kernel is exact up to roundoff
    let compressed = p.matmul(inner.matrix()).matmul(&p);
    PsdMatrix::from_product(&compressed).expect("compression of a PD matrix is PSD")
}

/// `n` matrices sharing one Haar eigenbasis, with independent diagonals drawn
/// log-uniformly from `[e^{−radius}, e^{radius}]`. Each diagonal entry is
/// replaced by zero with probability `zero_prob`.
pub fn commuting_family<T: Real, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    radius: f64,
    zero_prob: f64,
    rng: &mut R,
) -> Vec<PsdMatrix<T>> {
    let u = haar_unitary::<T, R>(m, rng);
    (0..n)
        .map(|_| {
            let d: Vec<T> = (0..m)
                .map(|_| {
                    let x = rng.random_range(-radius..=radius).exp();
                    if zero_prob > 0.0 && rng.random_bool(zero_prob.min(1.0)) {
                        T::zero()
                    } else {
                        T::lit(x)
                    }
                })
                .collect();
            psd_with_spectrum(&u, &d)
        })
        .collect()
}

fn psd_with_spectrum<T: Real>(u: &ComplexMatrix<T>, values: &[T]) -> PsdMatrix<T> {
    PsdMatrix::from_eigen_parts(values.to_vec(), u.clone())
}

/// Ensemble selector for [`random_psd`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RandomKind {
    /// One matrix `G*G/m + μI`.
    Pd,
    /// One matrix of rank exactly `rank`.
    PsdRank { rank: usize },
    /// `n` commuting PD matrices with a shared eigenbasis.
    CommutingFamily { n: usize },
    /// One PD matrix with log-spectrum uniform in `[−radius, radius]`.
    LogUniform { radius: f64 },
}

/// Draws matrices of the given kind from a stream seeded by `seed`.
pub fn random_psd<T: Real>(m: usize, seed: u64, kind: RandomKind) -> Result<Vec<PsdMatrix<T>>> {
    if m == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        RandomKind::Pd => vec![random_pd::<T, _>(m, &mut rng).into_psd()],
        RandomKind::PsdRank { rank } => {
            if rank > m {
                return Err(Error::InvalidParameter(format!("rank {rank} exceeds dimension {m}")));
            }
            vec![random_psd_rank::<T, _>(m, rank, &mut rng)]
        }
        RandomKind::CommutingFamily { n } => {
            if n == 0 {
                return Err(Error::InvalidParameter("commuting family needs n ≥ 1".into()));
            }
            commuting_family::<T, _>(m, n, 1.0, 0.0, &mut rng)
        }
        RandomKind::LogUniform { radius } => {
            if !(radius >= 0.0 && radius.is_finite()) {
                return Err(Error::InvalidParameter(format!("radius must be finite and ≥ 0, got {radius}")));
            }
            vec![log_uniform_pd::<T, _>(m, radius, &mut rng).into_psd()]
        }
    })
}
