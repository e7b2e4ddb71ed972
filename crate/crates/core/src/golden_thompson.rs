//! Multivariate Golden–Thompson bounds against the `β_0` measure, the matching
//! log-majorization against `β_θ`, and the block-diagonal triple whose trace
//! inequality is an equality although no commutation relation holds.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix, Eigen, HermitianMatrix};
use crate::majorization::{check_majorization, MajorizationReport, MajorizationTol};
use crate::quadrature::BetaQuadrature;
use crate::scalar::Real;

/// Eigendecompositions of `H_j`, so `e^{zH_j}` costs two products per node.
struct ExpFamily<T> {
    eigs: Vec<Eigen<T>>,
    dim: usize,
}

impl<T: Real> ExpFamily<T> {
    fn new(hs: &[HermitianMatrix<T>]) -> Result<Self> {
        let first = hs.first().ok_or_else(|| Error::InvalidParameter("need at least one matrix".into()))?;
        let dim = first.dim();
        for h in hs {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch(dim, h.dim()));
            }
        }
        let eigs = hs.iter().map(|h| h.eig()).collect::<Result<_>>()?;
        Ok(Self { eigs, dim })
    }

    /// `∏_j e^{zH_j}`, left to right.
    fn product(&self, z: Complex<T>) -> ComplexMatrix<T> {
        self.eigs.iter().fold(ComplexMatrix::identity(self.dim), |acc, e| {
            acc.matmul(&e.reconstruct_complex(|l| (z * l).exp()))
        })
    }
}

/// `Tr |∏_j e^{(1+it)H_j}|^r`.
pub fn gt_integrand<T: Real>(hs: &[HermitianMatrix<T>], r: T, t: T) -> Result<T> {
    integrand(&ExpFamily::new(hs)?, r, t)
}

fn integrand<T: Real>(fam: &ExpFamily<T>, r: T, t: T) -> Result<T> {
    let x = fam.product(Complex::new(T::one(), t));
    Ok(singular_values(&x)?.as_slice().iter().map(|&s| s.powf(r)).sum())
}

/// Outcome of the trace inequality `Tr exp(rΣH_j) ≤ ∫ Tr|∏e^{(1+it)H_j}|^r dβ_0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GtReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub gap: f64,
    pub r: f64,
    pub quadrature_eps: f64,
    pub quadrature_mass: f64,
    pub tol: f64,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_majorization: Option<MajorizationReport>,
}

/// Smallest verdict tolerance accepted for a quadrature with tail `eps`.
pub fn min_tol(eps: f64) -> f64 {
    10.0 * eps
}

/// Checks the trace inequality with `tol = max(tol, 10ε)` relative to `max(1, lhs)`.
pub fn gt_check<T: Real>(hs: &[HermitianMatrix<T>], r: T, quad: &BetaQuadrature, tol: f64) -> Result<GtReport> {
    if quad.theta != 0.0 {
        return Err(Error::InvalidParameter(format!("trace bound needs the β_0 quadrature, got θ = {}", quad.theta)));
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    let fam = ExpFamily::new(hs)?;
    let sum = HermitianMatrix::weighted_sum(hs.iter().map(|h| (r, h)), fam.dim);
    let lhs = sum.exp()?.trace().to_f64_lossy();
    let rhs = quad.integrate(|t| Ok(integrand(&fam, r, T::lit(t))?.to_f64_lossy()))?;
    Ok(report(lhs, rhs, r.to_f64_lossy(), quad, tol))
}

fn report(lhs: f64, rhs: f64, r: f64, quad: &BetaQuadrature, tol: f64) -> GtReport {
    let tol = tol.max(min_tol(quad.eps));
    let gap = rhs - lhs;
    GtReport {
        lhs,
        rhs,
        gap,
        r,
        quadrature_eps: quad.eps,
        quadrature_mass: quad.mass(),
        tol,
        holds: gap >= -tol * lhs.abs().max(1.0),
        log_majorization: None,
    }
}

/// `Tr e^{H1} e^{(1+it)H2/2} e^{H3} e^{(1−it)H2/2}`.
pub fn lieb_integrand<T: Real>(h1: &HermitianMatrix<T>, h2: &HermitianMatrix<T>, h3: &HermitianMatrix<T>, t: T) -> Result<T> {
    let e1 = h1.exp()?;
    let e3 = h3.exp()?;
    let e2 = h2.eig()?;
    let half = T::lit(0.5);
    let left = e2.reconstruct_complex(|l| (Complex::new(half, half * t) * l).exp());
    let right = e2.reconstruct_complex(|l| (Complex::new(half, -half * t) * l).exp());
    Ok(e1.matrix().matmul(&left).matmul(e3.matrix()).matmul(&right).trace().re)
}

/// The three-matrix trace bound in integral form:
/// `Tr e^{H1+H2+H3} ≤ ∫ Tr e^{H1} e^{(1+it)H2/2} e^{H3} e^{(1−it)H2/2} dβ_0`.
pub fn lieb_check<T: Real>(
    h1: &HermitianMatrix<T>,
    h2: &HermitianMatrix<T>,
    h3: &HermitianMatrix<T>,
    quad: &BetaQuadrature,
    tol: f64,
) -> Result<GtReport> {
    if quad.theta != 0.0 {
        return Err(Error::InvalidParameter("trace bound needs the β_0 quadrature".into()));
    }
    let lhs = h1.add(h2).add(h3).exp()?.trace().to_f64_lossy();
    let rhs = quad.integrate(|t| Ok(lieb_integrand(h1, h2, h3, T::lit(t))?.to_f64_lossy()))?;
    Ok(report(lhs, rhs, 2.0, quad, tol))
}

/// Additive majorization `log λ(|∏A_j^θ|^{r/θ}) ≺ ∫ r·log λ(|∏A_j^{1+it}|) dβ_θ` with `A_j = e^{H_j}`.
///
/// The quadrature is renormalized to unit mass so both sides have the same
/// total `rΣ Tr H_j`. At `θ = 1` the measure is a point mass at `0` and the
/// quadrature is ignored.
pub fn gt_log_majorization<T: Real>(
    hs: &[HermitianMatrix<T>],
    theta: f64,
    r: f64,
    quad: Option<&BetaQuadrature>,
    tol: MajorizationTol,
) -> Result<MajorizationReport> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter(format!("θ must lie in (0, 1], got {theta}")));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    let fam = ExpFamily::new(hs)?;
    let log_sv = |z: Complex<T>, scale: f64| -> Result<Vec<f64>> {
        let s = singular_values(&fam.product(z))?;
        s.as_slice()
            .iter()
            .map(|&x| {
                let x = x.to_f64_lossy();
                if x > 0.0 {
                    Ok(scale * x.ln())
                } else {
                    Err(Error::Singular { min_eigenvalue: x, threshold: 0.0 })
                }
            })
            .collect()
    };
    let lhs = log_sv(Complex::new(T::lit(theta), T::zero()), r / theta)?;
    let rhs = if theta == 1.0 {
        log_sv(Complex::new(T::one(), T::zero()), r)?
    } else {
        let quad = quad.ok_or_else(|| Error::InvalidParameter("θ < 1 needs a β_θ quadrature".into()))?;
        if (quad.theta - theta).abs() > 1e-15 {
            return Err(Error::InvalidParameter(format!("quadrature built for θ = {}, need {theta}", quad.theta)));
        }
        let mass = quad.mass();
        let mut acc = vec![0.0; fam.dim];
        for (&t, &w) in quad.nodes.iter().zip(&quad.weights) {
            for (a, v) in acc.iter_mut().zip(log_sv(Complex::new(T::one(), T::lit(t)), r)?) {
                *a += w * v;
            }
        }
        acc.into_iter().map(|a| a / mass).collect()
    };
    check_majorization(&lhs, &rhs, tol)
}

/// Frobenius norm of one commutator in the non-commutativity witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorEntry {
    pub label: String,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub entries: Vec<CommutatorEntry>,
    pub min_norm: f64,
    /// Every listed commutator is non-zero.
    pub all_nonzero: bool,
}

/// Relative size below which a commutator counts as zero.
pub const COMMUTATOR_ZERO_TOL: f64 = 1e-12;

/// `H ⊕ H`, `(−H) ⊕ (−K)`, `K ⊕ K` for non-commuting `H`, `K`, and the
/// Frobenius norms of `[H_j, H_k]`, `[H_j, H_k + H_l]` and `[H_j, H_1 + H_2 + H_3]`.
pub fn equality_triple<T: Real>(h: &HermitianMatrix<T>, k: &HermitianMatrix<T>) -> Result<([HermitianMatrix<T>; 3], CommutatorReport)> {
    if h.dim() != k.dim() {
        return Err(Error::DimensionMismatch(h.dim(), k.dim()));
    }
    let scale = T::one() + h.matrix().frobenius_norm() * k.matrix().frobenius_norm();
    if h.matrix().commutator(k.matrix()).frobenius_norm() <= T::lit(COMMUTATOR_ZERO_TOL) * scale {
        return Err(Error::Precondition("H and K must not commute".into()));
    }
    let hm = h.matrix();
    let km = k.matrix();
    let neg_h = hm.scale(&-T::one());
    let neg_k = km.scale(&-T::one());
    let triple = [
        HermitianMatrix::new(hm.direct_sum(hm))?,
        HermitianMatrix::new(neg_h.direct_sum(&neg_k))?,
        HermitianMatrix::new(km.direct_sum(km))?,
    ];
    let total = triple[0].add(&triple[1]).add(&triple[2]);
    let mut entries = Vec::new();
    let mut push = |label: String, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>| {
        let norm = a.matrix().commutator(b.matrix()).frobenius_norm();
        let rel = norm / (T::one() + a.matrix().frobenius_norm() * b.matrix().frobenius_norm());
        entries.push((CommutatorEntry { label, norm: norm.to_f64_lossy() }, rel.to_f64_lossy()));
    };
    for j in 0..3 {
        for l in j + 1..3 {
            push(format!("[H{},H{}]", j + 1, l + 1), &triple[j], &triple[l]);
        }
    }
    for j in 0..3 {
        for a in 0..3 {
            for b in a + 1..3 {
                let s = triple[a].add(&triple[b]);
                push(format!("[H{},H{}+H{}]", j + 1, a + 1, b + 1), &triple[j], &s);
            }
        }
    }
    for j in 0..3 {
        push(format!("[H{},H1+H2+H3]", j + 1), &triple[j], &total);
    }
    let all_nonzero = entries.iter().all(|(_, rel)| *rel > COMMUTATOR_ZERO_TOL);
    let entries: Vec<CommutatorEntry> = entries.into_iter().map(|(e, _)| e).collect();
    let min_norm = entries.iter().map(|e| e.norm).fold(f64::INFINITY, f64::min);
    Ok((triple, CommutatorReport { entries, min_norm, all_nonzero }))
}

/// `Tr e^{H1} e^{H2} e^{H3}` (real part).
pub fn trace_of_exp_product<T: Real>(hs: &[HermitianMatrix<T>]) -> Result<T> {
    Ok(ExpFamily::new(hs)?.product(Complex::new(T::one(), T::zero())).trace().re)
}

/// The two matrices used in the regression example: `diag(1, 0)` and the Pauli `X`.
pub fn equality_triple_inputs<T: Real>() -> (HermitianMatrix<T>, HermitianMatrix<T>) {
    let h = HermitianMatrix::from_real_diagonal(&[T::one(), T::zero()]);
    let k = HermitianMatrix::from_real_rows(vec![vec![T::zero(), T::one()], vec![T::one(), T::zero()]])
        .expect("symmetric");
    (h, k)
}
