//! α-z-Rényi divergences, the Umegaki relative entropy, and monotonicity /
//! log-convexity scans in α and z.
//!
//! Powers of `σ` are generalized powers: negative exponents invert on the
//! support only, and `σ^0` is the support projection.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{graded_pd_eigenvalues, operator_norm, ComplexMatrix, PsdMatrix, RANK_TOL};
use crate::scalar::Real;
use crate::serde_ext;

/// Default threshold on `‖(I − σ⁰)ρ⁰‖_∞` for deciding `ρ⁰ ≤ σ⁰`.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Largest `ln cond` of the middle factor for which the graded evaluation of
/// `Q_{α,z}` is trusted.
const GRADED_MAX_LOG_COND: f64 = 18.0;

/// A non-zero PSD matrix with its support projection cached.
#[derive(Clone, Debug)]
pub struct State<T> {
    matrix: PsdMatrix<T>,
    support: PsdMatrix<T>,
}

impl<T: Real> State<T> {
    pub fn new(matrix: PsdMatrix<T>) -> Result<Self> {
        if matrix.rank() == 0 || !(matrix.trace() > T::zero()) {
            return Err(Error::InvalidParameter("state must be non-zero".into()));
        }
        let support = matrix.support_projection();
        Ok(Self { matrix, support })
    }

    /// Rescales to unit trace.
    pub fn normalized(matrix: PsdMatrix<T>) -> Result<Self> {
        let t = matrix.trace();
        if !(t > T::zero()) {
            return Err(Error::InvalidParameter("state must be non-zero".into()));
        }
        Self::new(PsdMatrix::from_product(&matrix.matrix().scale(&(T::one() / t)))?)
    }

    pub fn from_real_diagonal(values: &[T]) -> Result<Self> {
        Self::new(PsdMatrix::from_real_diagonal(values)?)
    }

    pub fn matrix(&self) -> &PsdMatrix<T> {
        &self.matrix
    }

    pub fn support(&self) -> &PsdMatrix<T> {
        &self.support
    }

    pub fn trace(&self) -> T {
        self.matrix.trace()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `U ρ U*`.
    pub fn conjugate(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(self.matrix.congruence(u)?)
    }
}

/// How the support of `ρ` sits relative to that of `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportRelation {
    /// `ρ⁰ ≤ σ⁰`.
    Contained,
    /// Neither contained nor orthogonal.
    Overlap,
    /// `ρ⁰σ⁰ = 0`.
    Orthogonal,
}

impl SupportRelation {
    pub fn classify<T: Real>(rho: &State<T>, sigma: &State<T>, tol: f64) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
        }
        let m = rho.dim();
        let p = rho.support().matrix();
        let q = sigma.support().matrix();
        let outside = (&ComplexMatrix::identity(m) - q).matmul(p);
        if operator_norm(&outside)? <= T::lit(tol) {
            return Ok(Self::Contained);
        }
        if operator_norm(&q.matmul(p))? <= T::lit(tol) {
            return Ok(Self::Orthogonal);
        }
        Ok(Self::Overlap)
    }
}

/// A value in `[−∞, +∞]`; divergences only ever reach `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    PosInf,
}

impl<T: Real> Extended<T> {
    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Self::Finite(x) => Some(x),
            Self::PosInf => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::Finite(x) => x.to_f64_lossy(),
            Self::PosInf => f64::INFINITY,
        }
    }
}

impl<T: Real> Serialize for Extended<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_ext::extended(&self.to_f64(), s)
    }
}

/// A divergence (or `Q`) value tagged with the support relation it was computed under.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivergenceValue<T: Real> {
    pub value: Extended<T>,
    pub finite: bool,
    pub support_relation: SupportRelation,
}

impl<T: Real> DivergenceValue<T> {
    fn new(value: Extended<T>, support_relation: SupportRelation) -> Self {
        Self { value, finite: value.is_finite(), support_relation }
    }
}

fn check_alpha_z<T: Real>(alpha: T, z: T) -> Result<()> {
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("α must be finite and ≥ 0, got {alpha}")));
    }
    if !(z > T::zero()) || !z.is_finite() {
        return Err(Error::InvalidParameter(format!("z must be finite and > 0, got {z}")));
    }
    Ok(())
}

/// `Q_{α,z}(ρ‖σ) = Tr(ρ^{α/2z} σ^{(1−α)/z} ρ^{α/2z})^z`, or `+∞` when `α > 1` and `ρ⁰ ≰ σ⁰`.
pub fn q_alpha_z<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z: T) -> Result<DivergenceValue<T>> {
    q_alpha_z_with(rho, sigma, alpha, z, SUPPORT_TOL)
}

pub fn q_alpha_z_with<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z: T, support_tol: f64) -> Result<DivergenceValue<T>> {
    check_alpha_z(alpha, z)?;
    let rel = SupportRelation::classify(rho, sigma, support_tol)?;
    let value = match rel {
        _ if alpha > T::one() && rel != SupportRelation::Contained => Extended::PosInf,
        // ρ⁰σ⁰ = 0 kills the sandwich for every α ≤ 1
        SupportRelation::Orthogonal => Extended::Finite(T::zero()),
        _ => Extended::Finite(sandwich_trace(rho, sigma, alpha, z)?),
    };
    Ok(DivergenceValue::new(value, rel))
}

fn sandwich_trace<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z: T) -> Result<T> {
    if let Some(q) = graded_sandwich_trace(rho, sigma, alpha, z)? {
        return Ok(q);
    }
    let two = T::lit(2.0);
    let r = rho.matrix().pow(alpha / (two * z));
    let s = sigma.matrix().pow((T::one() - alpha) / z);
    let inner = PsdMatrix::from_product(&r.matrix().congruence(s.matrix()))?;
    // kernel cut relative to the factor norms, not to the (possibly tiny) product
    let scale = r.eigen().values.largest().powi(2) * s.eigen().values.largest();
    let cut = T::tol(RANK_TOL) * scale;
    Ok(inner
        .eigen()
        .values
        .as_slice()
        .iter()
        .filter(|&&l| l > cut)
        .map(|&l| l.powf(z))
        .sum())
}

/// The sandwich `ρ^a σ^b ρ^a` (`a = α/2z`, `b = (1−α)/z`) has the spectrum of
/// `G K G` where `G` is diagonal in the eigenbasis of one factor and `K` is the
/// other factor's power in that basis; the same holds with the roles swapped.
/// When `K` is well conditioned the graded solver keeps the tiny eigenvalues
/// that dominate `Σλ^z` for small `z`, where the plain product loses them. We
/// take the basis whose `K` is better conditioned; `None` (some `K` singular or
/// too ill-conditioned) sends the caller to the plain product.
fn graded_sandwich_trace<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z: T) -> Result<Option<T>> {
    let two = T::lit(2.0);
    let a2 = alpha / z;
    let b = (T::one() - alpha) / z;
    let log_cond = |x: &State<T>, p: T| -> Option<T> {
        let l = x.matrix().eigen().values.as_slice();
        let (hi, lo) = (l[0], l[l.len() - 1]);
        (x.matrix().rank() == l.len()).then(|| p.abs() * (hi / lo).ln())
    };
    // outer factor is diagonal, middle factor K = U*·inner^p·U
    let (outer, q_outer, inner, p_inner) = match (log_cond(rho, a2), log_cond(sigma, b)) {
        (Some(kr), Some(ks)) if ks < kr => (rho, a2 / two, sigma, b),
        (Some(_), _) => (sigma, b / two, rho, a2),
        (None, Some(_)) => (rho, a2 / two, sigma, b),
        (None, None) => return Ok(None),
    };
    if log_cond(inner, p_inner).map_or(true, |k| k > T::lit(GRADED_MAX_LOG_COND)) {
        return Ok(None);
    }
    let eo = outer.matrix().eigen();
    let thr = outer.matrix().kernel_threshold();
    let support: Vec<usize> = (0..eo.values.len()).filter(|&i| eo.values[i] > thr).collect();
    if support.is_empty() {
        return Ok(Some(T::zero()));
    }
    let k = eo.vectors.adjoint().congruence(&inner.matrix().eigen().reconstruct(|l| l.powf(p_inner)));
    let g: Vec<T> = support.iter().map(|&i| eo.values[i].powf(q_outer)).collect();
    let h = ComplexMatrix::from_fn(support.len(), |i, j| k[(support[i], support[j])] * g[i] * g[j]);
    Ok(graded_pd_eigenvalues(&h)?.map(|l| l.as_slice().iter().map(|&x| x.powf(z)).sum()))
}

/// `D_{α,z}(ρ‖σ) = log(Q_{α,z}/Tr ρ)/(α − 1)`; `α = 1` dispatches to [`d1_normalized`].
pub fn d_alpha_z<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z: T) -> Result<DivergenceValue<T>> {
    d_alpha_z_with(rho, sigma, alpha, z, SUPPORT_TOL)
}

pub fn d_alpha_z_with<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z: T, support_tol: f64) -> Result<DivergenceValue<T>> {
    check_alpha_z(alpha, z)?;
    if alpha == T::one() {
        return d1_normalized_with(rho, sigma, support_tol);
    }
    let q = q_alpha_z_with(rho, sigma, alpha, z, support_tol)?;
    let value = match q.value {
        Extended::PosInf => Extended::PosInf,
        // only reachable for α < 1, where log 0/(α − 1) = +∞
        Extended::Finite(x) if x <= T::zero() => Extended::PosInf,
        Extended::Finite(x) => Extended::Finite((x / rho.trace()).ln() / (alpha - T::one())),
    };
    Ok(DivergenceValue::new(value, q.support_relation))
}

/// Umegaki relative entropy `Tr ρ(log ρ − log σ)`, `+∞` unless `ρ⁰ ≤ σ⁰`.
pub fn umegaki<T: Real>(rho: &State<T>, sigma: &State<T>) -> Result<DivergenceValue<T>> {
    umegaki_with(rho, sigma, SUPPORT_TOL)
}

pub fn umegaki_with<T: Real>(rho: &State<T>, sigma: &State<T>, support_tol: f64) -> Result<DivergenceValue<T>> {
    let rel = SupportRelation::classify(rho, sigma, support_tol)?;
    if rel != SupportRelation::Contained {
        return Ok(DivergenceValue::new(Extended::PosInf, rel));
    }
    let entropy: T = rho
        .matrix()
        .spectrum()
        .as_slice()
        .iter()
        .filter(|&&l| l > T::zero())
        .map(|&l| l * l.ln())
        .sum();
    let cross = rho.matrix().matrix().matmul(sigma.matrix().log_on_support().matrix()).trace().re;
    Ok(DivergenceValue::new(Extended::Finite(entropy - cross), rel))
}

/// `D_1(ρ‖σ) = D(ρ‖σ)/Tr ρ`.
pub fn d1_normalized<T: Real>(rho: &State<T>, sigma: &State<T>) -> Result<DivergenceValue<T>> {
    d1_normalized_with(rho, sigma, SUPPORT_TOL)
}

pub fn d1_normalized_with<T: Real>(rho: &State<T>, sigma: &State<T>, support_tol: f64) -> Result<DivergenceValue<T>> {
    let d = umegaki_with(rho, sigma, support_tol)?;
    let value = match d.value {
        Extended::Finite(x) => Extended::Finite(x / rho.trace()),
        Extended::PosInf => Extended::PosInf,
    };
    Ok(DivergenceValue::new(value, d.support_relation))
}

/// One grid point of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub z: f64,
    #[serde(serialize_with = "serde_ext::extended")]
    pub value: f64,
    pub finite: bool,
}

fn row<T: Real>(alpha: T, z: T, v: DivergenceValue<T>) -> ScanRow {
    ScanRow {
        alpha: alpha.to_f64_lossy(),
        z: z.to_f64_lossy(),
        value: v.value.to_f64(),
        finite: v.finite,
    }
}

/// Largest violation of `v[i+1] ≥ v[i]` (relative to `max(1, |v[i]|)`);
/// `+∞` followed by a finite value counts as an infinite violation.
fn worst_decrease(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|p| match (p[0].is_finite(), p[1].is_finite()) {
            (true, true) => (p[0] - p[1]) / p[0].abs().max(1.0),
            (false, true) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn check_grid<T: Real>(grid: &[T], what: &str) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidParameter(format!("{what} grid must be non-empty and strictly increasing")));
    }
    Ok(())
}

/// Values of `α ↦ D_{α,z}` and the monotonicity verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaScan {
    pub rows: Vec<ScanRow>,
    /// Largest relative decrease between consecutive grid points (≤ 0 when monotone).
    #[serde(serialize_with = "serde_ext::extended")]
    pub worst_decrease: f64,
    pub monotone: bool,
    /// `D_α ≤ D_1 ≤ D_α'` for grid points `α < 1 < α'`; `None` if the grid does not straddle 1.
    pub straddles_d1: Option<bool>,
    pub tol: f64,
}

/// `α ↦ D_{α,z}(ρ‖σ)` along an increasing grid; `α = 1` uses [`d1_normalized`].
pub fn alpha_monotonicity_scan<T: Real>(rho: &State<T>, sigma: &State<T>, z: T, grid: &[T], tol: f64) -> Result<AlphaScan> {
    check_grid(grid, "α")?;
    let rows: Vec<ScanRow> = grid
        .iter()
        .map(|&a| Ok(row(a, z, d_alpha_z(rho, sigma, a, z)?)))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let worst = worst_decrease(&values);

    let below: Vec<f64> = rows.iter().filter(|r| r.alpha < 1.0).map(|r| r.value).collect();
    let above: Vec<f64> = rows.iter().filter(|r| r.alpha > 1.0).map(|r| r.value).collect();
    let straddles_d1 = if below.is_empty() || above.is_empty() {
        None
    } else {
        let d1 = d1_normalized(rho, sigma)?.value.to_f64();
        let slack = |x: f64| tol * x.abs().max(1.0);
        let lo = below.iter().all(|&x| x <= d1 + slack(d1) || (x.is_infinite() && d1.is_infinite()));
        let hi = above.iter().all(|&x| x >= d1 - slack(d1) || x.is_infinite());
        Some(lo && hi)
    };
    Ok(AlphaScan {
        rows,
        worst_decrease: worst,
        monotone: worst <= tol,
        straddles_d1,
        tol,
    })
}

/// One row of [`log_convexity_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvexityRow {
    pub theta: f64,
    /// `Q_{θα1+(1−θ)α2,z}`.
    #[serde(serialize_with = "serde_ext::extended")]
    pub lhs: f64,
    /// `Q_{α1,z}^θ Q_{α2,z}^{1−θ}`.
    #[serde(serialize_with = "serde_ext::extended")]
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogConvexity {
    pub alpha1: f64,
    pub alpha2: f64,
    pub z: f64,
    pub rows: Vec<ConvexityRow>,
    pub holds: bool,
}

/// `Q_{θα1+(1−θ)α2,z} ≤ Q_{α1,z}^θ Q_{α2,z}^{1−θ}` for each `θ` in `thetas ⊂ [0, 1]`.
#[allow(clippy::too_many_arguments)]
pub fn log_convexity_check<T: Real>(
    rho: &State<T>,
    sigma: &State<T>,
    z: T,
    alpha1: T,
    alpha2: T,
    thetas: &[T],
    tol: f64,
) -> Result<LogConvexity> {
    if SupportRelation::classify(rho, sigma, SUPPORT_TOL)? == SupportRelation::Orthogonal {
        return Err(Error::Precondition("log-convexity needs non-orthogonal supports".into()));
    }
    let q1 = q_alpha_z(rho, sigma, alpha1, z)?.value;
    let q2 = q_alpha_z(rho, sigma, alpha2, z)?.value;
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        if !(theta >= T::zero() && theta <= T::one()) {
            return Err(Error::InvalidParameter(format!("θ must lie in [0, 1], got {theta}")));
        }
        let mid = theta * alpha1 + (T::one() - theta) * alpha2;
        let lhs = q_alpha_z(rho, sigma, mid, z)?.value.to_f64();
        let th = theta.to_f64_lossy();
        let rhs = if th == 0.0 {
            q2.to_f64()
        } else if th == 1.0 {
            q1.to_f64()
        } else {
            // (+∞)^θ = +∞
            q1.to_f64().powf(th) * q2.to_f64().powf(1.0 - th)
        };
        let holds = rhs.is_infinite() || lhs <= rhs + tol * rhs.abs().max(1.0);
        rows.push(ConvexityRow { theta: th, lhs, rhs, holds });
    }
    Ok(LogConvexity {
        alpha1: alpha1.to_f64_lossy(),
        alpha2: alpha2.to_f64_lossy(),
        z: z.to_f64_lossy(),
        holds: rows.iter().all(|r| r.holds),
        rows,
    })
}

/// Expected direction of `z ↦ D_{α,z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZDirection {
    /// `α ∈ (0, 1)`.
    NonDecreasing,
    /// `α > 1`.
    NonIncreasing,
    /// `α = 0`: the case split says nothing.
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZScan {
    pub alpha: f64,
    pub direction: ZDirection,
    pub rows: Vec<ScanRow>,
    #[serde(serialize_with = "serde_ext::extended")]
    pub worst_violation: f64,
    pub holds: bool,
    pub tol: f64,
}

/// `z ↦ D_{α,z}(ρ‖σ)` with the direction verdict.
pub fn z_monotonicity_scan<T: Real>(rho: &State<T>, sigma: &State<T>, alpha: T, z_grid: &[T], tol: f64) -> Result<ZScan> {
    if alpha == T::one() {
        return Err(Error::InvalidParameter("z-scan needs α ≠ 1".into()));
    }
    check_grid(z_grid, "z")?;
    let rows: Vec<ScanRow> = z_grid
        .iter()
        .map(|&z| Ok(row(alpha, z, d_alpha_z(rho, sigma, alpha, z)?)))
        .collect::<Result<_>>()?;
    let direction = if alpha > T::one() {
        ZDirection::NonIncreasing
    } else if alpha > T::zero() {
        ZDirection::NonDecreasing
    } else {
        ZDirection::Unspecified
    };
    let mut values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let worst = match direction {
        ZDirection::NonDecreasing => worst_decrease(&values),
        ZDirection::NonIncreasing => {
            values.reverse();
            worst_decrease(&values)
        }
        ZDirection::Unspecified => f64::NEG_INFINITY,
    };
    Ok(ZScan {
        alpha: alpha.to_f64_lossy(),
        direction,
        rows,
        worst_violation: worst,
        holds: worst <= tol,
        tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineScan {
    pub kappa: f64,
    pub z0: f64,
    pub rows: Vec<ScanRow>,
    /// Verdict on the `α ≤ 1` part of the grid, where monotonicity is known.
    pub monotone_up_to_one: Option<bool>,
    /// Rows with `α > 1`: reported, never judged.
    pub exploratory_from: usize,
    pub tol: f64,
}

/// `α ↦ D_{α, κα+z0}(ρ‖σ)`.
pub fn line_scan<T: Real>(rho: &State<T>, sigma: &State<T>, kappa: T, z0: T, grid: &[T], tol: f64) -> Result<LineScan> {
    if !(kappa >= T::zero()) || !(z0 >= T::zero()) {
        return Err(Error::InvalidParameter(format!("need κ ≥ 0 and z0 ≥ 0, got κ = {kappa}, z0 = {z0}")));
    }
    check_grid(grid, "α")?;
    let rows: Vec<ScanRow> = grid
        .iter()
        .map(|&a| {
            let z = kappa * a + z0;
            if !(z > T::zero()) {
                return Err(Error::InvalidParameter(format!("z(α) = κα + z0 vanishes at α = {a}")));
            }
            Ok(row(a, z, d_alpha_z(rho, sigma, a, z)?))
        })
        .collect::<Result<_>>()?;
    let split = rows.iter().position(|r| r.alpha > 1.0).unwrap_or(rows.len());
    let proved: Vec<f64> = rows[..split].iter().map(|r| r.value).collect();
    let monotone_up_to_one = (!proved.is_empty()).then(|| worst_decrease(&proved) <= tol);
    Ok(LineScan {
        kappa: kappa.to_f64_lossy(),
        z0: z0.to_f64_lossy(),
        rows,
        monotone_up_to_one,
        exploratory_from: split,
        tol,
    })
}

/// Classical Rényi quantity `Σ p_i^α q_i^{1−α}` over `p_i > 0` (the commuting-case oracle).
pub fn classical_q(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&x, _)| x > 0.0)
        .map(|(&x, &y)| if y > 0.0 { x.powf(alpha) * y.powf(1.0 - alpha) } else if alpha < 1.0 { 0.0 } else { f64::INFINITY })
        .sum()
}

/// Evenly spaced grid with `n` points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{case_rng, haar_unitary, log_uniform_pd, with_spectrum};
    use proptest::prelude::*;

    fn diag(d: &[f64]) -> State<f64> {
        State::from_real_diagonal(d).unwrap()
    }

    fn random_state(seed: u64, m: usize) -> State<f64> {
        let mut rng = case_rng(seed, 0);
        State::normalized(log_uniform_pd(m, 1.5, &mut rng).into_psd()).unwrap()
    }

    fn fin(v: DivergenceValue<f64>) -> f64 {
        v.value.finite().expect("finite value")
    }

    #[test]
    fn q_examples() {
        let r = random_state(1, 3);
        for (a, z) in [(0.0, 1.0), (0.5, 0.5), (2.0, 2.0), (3.0, 0.5)] {
            assert!((fin(q_alpha_z(&r, &r, a, z).unwrap()) - 1.0).abs() < 1e-10, "α={a} z={z}");
        }
        let v = q_alpha_z(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 2.0, 1.0).unwrap();
        assert_eq!(v.value, Extended::PosInf);
        assert_eq!(v.support_relation, SupportRelation::Orthogonal);
        let v = q_alpha_z(&diag(&[0.5, 0.5]), &diag(&[0.25, 0.75]), 2.0, 1.0).unwrap();
        assert!((fin(v) - 4.0 / 3.0).abs() < 1e-14);
        assert!(q_alpha_z(&r, &r, -0.5, 1.0).is_err());
        assert!(q_alpha_z(&r, &r, 0.5, 0.0).is_err());
    }

    #[test]
    fn d_examples() {
        let r = random_state(2, 3);
        assert!(fin(d_alpha_z(&r, &r, 0.5, 1.0).unwrap()).abs() < 1e-10);
        let v = d_alpha_z(&diag(&[0.5, 0.5]), &diag(&[0.25, 0.75]), 2.0, 1.0).unwrap();
        assert!((fin(v) - (4f64 / 3.0).ln()).abs() < 1e-14);
        assert!((fin(v) - 0.287682).abs() < 1e-6);
        // orthogonal supports with α < 1: Q = 0, D = +∞
        let v = d_alpha_z(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 0.5, 1.0).unwrap();
        assert_eq!(v.value, Extended::PosInf);
    }

    #[test]
    fn petz_matches_classical_renyi() {
        let mut rng = case_rng(3, 0);
        let u = haar_unitary::<f64, _>(3, &mut rng);
        let (p, q) = ([0.5, 0.3, 0.2], [0.1, 0.6, 0.3]);
        let rho = State::new(PsdMatrix::from_product(&with_spectrum(&u, &p)).unwrap()).unwrap();
        let sigma = State::new(PsdMatrix::from_product(&with_spectrum(&u, &q)).unwrap()).unwrap();
        for a in [0.0, 0.3, 0.8, 1.7, 2.5] {
            let expected = classical_q(&p, &q, a).ln() / (a - 1.0);
            for z in [0.5, 1.0, 2.0] {
                assert!((fin(d_alpha_z(&rho, &sigma, a, z).unwrap()) - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn umegaki_examples() {
        let r = random_state(4, 3);
        assert!(fin(umegaki(&r, &r).unwrap()).abs() < 1e-12);
        let v = umegaki(&diag(&[0.5, 0.5]), &diag(&[0.25, 0.75])).unwrap();
        assert!((fin(v) - (0.5 * 2f64.ln() + 0.5 * (2f64 / 3.0).ln())).abs() < 1e-14);
        assert_eq!(umegaki(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0])).unwrap().value, Extended::PosInf);
        let v = d1_normalized(&diag(&[1.0, 1.0]), &diag(&[0.5, 1.5])).unwrap();
        let raw = umegaki(&diag(&[1.0, 1.0]), &diag(&[0.5, 1.5])).unwrap();
        assert!((fin(v) - fin(raw) / 2.0).abs() < 1e-15);
        assert_eq!(d_alpha_z(&diag(&[1.0, 1.0]), &diag(&[0.5, 1.5]), 1.0, 3.0).unwrap(), v);
    }

    #[test]
    fn support_relations() {
        let full = diag(&[0.5, 0.5]);
        let e1 = diag(&[1.0, 0.0]);
        let e2 = diag(&[0.0, 1.0]);
        assert_eq!(SupportRelation::classify(&e1, &full, SUPPORT_TOL).unwrap(), SupportRelation::Contained);
        assert_eq!(SupportRelation::classify(&full, &e1, SUPPORT_TOL).unwrap(), SupportRelation::Overlap);
        assert_eq!(SupportRelation::classify(&e1, &e2, SUPPORT_TOL).unwrap(), SupportRelation::Orthogonal);
        assert!(State::from_real_diagonal(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn alpha_scan_examples() {
        let grid = linear_grid(0.0, 3.0, 41);
        let r = random_state(5, 3);
        let s = alpha_monotonicity_scan(&r, &r, 1.0, &grid, 1e-8).unwrap();
        assert!(s.monotone && s.rows.iter().all(|row| row.value.abs() < 1e-10));
        let (p, q) = ([0.7, 0.2, 0.1], [0.2, 0.3, 0.5]);
        let s = alpha_monotonicity_scan(&diag(&p), &diag(&q), 1.0, &grid, 1e-8).unwrap();
        assert!(s.monotone);
        assert_eq!(s.straddles_d1, Some(true));
        for row in &s.rows {
            if row.alpha != 1.0 {
                let expected = classical_q(&p, &q, row.alpha).ln() / (row.alpha - 1.0);
                assert!((row.value - expected).abs() < 1e-12);
            }
        }
        let sigma = random_state(6, 3);
        for z in [0.5, 1.0, 2.0] {
            let s = alpha_monotonicity_scan(&r, &sigma, z, &grid, 1e-8).unwrap();
            assert!(s.monotone, "z = {z}: {}", s.worst_decrease);
        }
    }

    #[test]
    fn overlap_supports_go_infinite_at_one() {
        let rho = diag(&[0.5, 0.5, 0.0]);
        let sigma = diag(&[0.3, 0.0, 0.7]);
        let s = alpha_monotonicity_scan(&rho, &sigma, 1.0, &[0.2, 0.6, 1.0, 1.5], 1e-10).unwrap();
        assert!(s.monotone);
        assert!(s.rows[0].finite && !s.rows[2].finite && !s.rows[3].finite);
        assert_eq!(s.straddles_d1, Some(true));
    }

    #[test]
    fn convexity_examples() {
        let r = random_state(7, 3);
        let s = random_state(8, 3);
        let c = log_convexity_check(&r, &s, 1.0, 1.3, 1.3, &[0.25, 0.5], 1e-12).unwrap();
        assert!(c.holds && c.rows.iter().all(|row| (row.lhs - row.rhs).abs() < 1e-12 * row.rhs));
        let c = log_convexity_check(&r, &s, 1.0, 0.5, 2.5, &[0.0, 1.0], 1e-12).unwrap();
        assert!(c.rows.iter().all(|row| (row.lhs - row.rhs).abs() < 1e-12 * row.rhs));
        let c = log_convexity_check(&r, &s, 0.7, 0.5, 2.5, &[0.25, 0.5, 0.75], 1e-10).unwrap();
        assert!(c.holds);
        assert!(log_convexity_check(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 1.0, 0.5, 2.0, &[0.5], 1e-10).is_err());
    }

    #[test]
    fn z_scan_examples() {
        let zs = [0.25, 0.5, 1.0, 2.0, 4.0];
        let (p, q) = ([0.7, 0.2, 0.1], [0.2, 0.3, 0.5]);
        for a in [0.5, 2.0] {
            let s = z_monotonicity_scan(&diag(&p), &diag(&q), a, &zs, 1e-12).unwrap();
            assert!(s.holds);
            assert!(s.rows.windows(2).all(|w| (w[0].value - w[1].value).abs() < 1e-12));
        }
        let r = random_state(9, 3);
        let s = z_monotonicity_scan(&r, &r, 2.0, &zs, 1e-12).unwrap();
        assert!(s.rows.iter().all(|row| row.value.abs() < 1e-10));
        let sigma = random_state(10, 3);
        let up = z_monotonicity_scan(&r, &sigma, 0.5, &zs, 1e-10).unwrap();
        assert_eq!(up.direction, ZDirection::NonDecreasing);
        assert!(up.holds && up.rows[4].value > up.rows[0].value);
        let down = z_monotonicity_scan(&r, &sigma, 2.0, &zs, 1e-10).unwrap();
        assert_eq!(down.direction, ZDirection::NonIncreasing);
        assert!(down.holds && down.rows[4].value < down.rows[0].value);
        assert!(z_monotonicity_scan(&r, &sigma, 1.0, &zs, 1e-10).is_err());
    }

    #[test]
    fn small_z_keeps_tiny_eigenvalues() {
        // σ^{(1−α)/z} = σ^19 spans ~30 decades; the smallest sandwich eigenvalue still carries weight
        let (p, q) = ([0.6, 0.3, 0.1], [0.02, 0.18, 0.8]);
        let u = haar_unitary::<f64, _>(3, &mut case_rng(4, 0));
        let r = diag(&p).conjugate(&u).unwrap();
        let s = diag(&q).conjugate(&u).unwrap();
        let got: f64 = fin(q_alpha_z(&r, &s, 0.05, 0.05).unwrap());
        let want = classical_q(&p, &q, 0.05);
        assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn line_scan_examples() {
        let r = random_state(11, 3);
        let s = random_state(12, 3);
        let grid = linear_grid(0.1, 2.5, 9);
        let flat = line_scan(&r, &s, 0.0, 1.0, &grid, 1e-10).unwrap();
        let alpha = alpha_monotonicity_scan(&r, &s, 1.0, &grid, 1e-10).unwrap();
        assert_eq!(flat.rows, alpha.rows);
        let (p, q) = ([0.7, 0.2, 0.1], [0.2, 0.3, 0.5]);
        let sand = line_scan(&diag(&p), &diag(&q), 1.0, 0.0, &grid, 1e-10).unwrap();
        for row in &sand.rows {
            assert!((row.value - classical_q(&p, &q, row.alpha).ln() / (row.alpha - 1.0)).abs() < 1e-12);
            assert_eq!(row.z, row.alpha);
        }
        assert_eq!(sand.monotone_up_to_one, Some(true));
        assert!(sand.rows[sand.exploratory_from].alpha > 1.0);
        assert!(line_scan(&r, &s, 1.0, -0.5, &grid, 1e-10).is_err());
        assert!(line_scan(&r, &s, 1.0, 0.0, &[0.0, 0.5], 1e-10).is_err());
    }

    #[test]
    fn alpha_limit_at_one() {
        let r = random_state(13, 3);
        let s = random_state(14, 3);
        let d1 = fin(d1_normalized(&r, &s).unwrap());
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-3] {
            let q_gap = (fin(q_alpha_z(&r, &s, 1.0 + eps, 1.3).unwrap()) - r.trace())
                .abs()
                .max((fin(q_alpha_z(&r, &s, 1.0 - eps, 1.3).unwrap()) - r.trace()).abs());
            assert!(q_gap < last);
            last = q_gap;
        }
        for a in [1.0 - 1e-3, 1.0 + 1e-3] {
            assert!((fin(d_alpha_z(&r, &s, a, 1.3).unwrap()) - d1).abs() <= 1e-2 * (1.0 + d1.abs()));
        }
    }

    #[test]
    fn serializes_infinity() {
        let v = q_alpha_z(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 2.0, 1.0).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"value":"inf","finite":false,"support_relation":"orthogonal"}"#);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn unitary_covariance(seed in any::<u64>(), a in 0.0f64..3.0, z in 0.3f64..3.0) {
            prop_assume!((a - 1.0).abs() > 1e-3);
            let r = random_state(seed, 3);
            let s = random_state(seed.wrapping_add(1), 3);
            let u = haar_unitary::<f64, _>(3, &mut case_rng(seed, 2));
            let d = fin(d_alpha_z(&r, &s, a, z).unwrap());
            let du = fin(d_alpha_z(&r.conjugate(&u).unwrap(), &s.conjugate(&u).unwrap(), a, z).unwrap());
            prop_assert!((d - du).abs() <= 1e-9 * (1.0 + d.abs()));
        }
    }
}
