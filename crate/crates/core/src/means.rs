//! Weighted geometric means of positive definite matrices: the two-variable
//! mean `A #_α B`, the Karcher mean, the Log-Euclidean mean and power means.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix, Spectrum};
use crate::majorization::{check_log_majorization_with, MajorizationReport, MajorizationTol};
use crate::scalar::Real;

/// Probability vector with strictly positive entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector<T>(Vec<T>);

/// Allowed deviation of `Σ w_j` from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

impl<T: Real> WeightVector<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("weight vector is empty".into()));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("weights must be finite and positive, got {w}")));
        }
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > T::tol(WEIGHT_SUM_TOL) {
            return Err(Error::InvalidParameter(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(weights))
    }

    /// Rescales positive weights to sum to one.
    pub fn normalized(weights: Vec<T>) -> Result<Self> {
        let sum: T = weights.iter().copied().sum();
        if !(sum > T::zero()) {
            return Err(Error::InvalidParameter("weights must have positive sum".into()));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![T::one() / T::from_usize(n).expect("small count"); n])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies the same permutation used for the matrices.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self(order.iter().map(|&i| self.0[i]).collect())
    }
}

fn check_family<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>) -> Result<usize> {
    let first = a.first().ok_or_else(|| Error::InvalidParameter("empty matrix list".into()))?;
    if a.len() != w.len() {
        return Err(Error::DimensionMismatch(a.len(), w.len()));
    }
    let m = first.dim();
    for x in a {
        if x.dim() != m {
            return Err(Error::DimensionMismatch(m, x.dim()));
        }
    }
    Ok(m)
}

/// `A #_α B = A^{1/2}(A^{−1/2}BA^{−1/2})^α A^{1/2}` for `α ∈ [0, 1]`.
pub fn geometric_mean_two<T: Real>(a: &PdMatrix<T>, b: &PdMatrix<T>, alpha: T) -> Result<PdMatrix<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidParameter(format!("α must lie in [0, 1], got {alpha}")));
    }
    if alpha == T::zero() {
        return Ok(a.clone());
    }
    if alpha == T::one() {
        return Ok(b.clone());
    }
    weighted_geometric_mean(a, b, alpha)
}

/// `A #_t B` for any real `t` (same formula, no range restriction).
pub fn weighted_geometric_mean<T: Real>(a: &PdMatrix<T>, b: &PdMatrix<T>, t: T) -> Result<PdMatrix<T>> {
    let ah = a.sqrt();
    let inner = PdMatrix::from_product(&a.inv_sqrt().matrix().congruence(b.matrix()))?;
    PdMatrix::from_product(&ah.matrix().congruence(inner.pow(t).matrix()))
}

/// `δ(A, B) = ‖log A^{−1/2}BA^{−1/2}‖_F`.
pub fn riemannian_distance<T: Real>(a: &PdMatrix<T>, b: &PdMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let inner = PsdMatrix::from_product(&a.inv_sqrt().matrix().congruence(b.matrix()))?;
    let l = inner.eigen().values.as_slice();
    if let Some(&bad) = l.iter().find(|&&x| !(x > T::zero())) {
        return Err(Error::Singular {
            min_eigenvalue: bad.to_f64_lossy(),
            threshold: 0.0,
        });
    }
    Ok(l.iter().map(|&x| x.ln().powi(2)).sum::<T>().sqrt())
}

/// `Σ_j w_j log(X^{1/2} A_j^{−1} X^{1/2})`.
pub fn karcher_field<T: Real>(x: &PdMatrix<T>, a: &[PdMatrix<T>], w: &WeightVector<T>) -> Result<HermitianMatrix<T>> {
    let m = check_family(a, w)?;
    if x.dim() != m {
        return Err(Error::DimensionMismatch(m, x.dim()));
    }
    let inverses: Vec<PdMatrix<T>> = a.iter().map(PdMatrix::inv).collect();
    field_with_inverses(x, &inverses, w)
}

fn field_with_inverses<T: Real>(x: &PdMatrix<T>, inverses: &[PdMatrix<T>], w: &WeightVector<T>) -> Result<HermitianMatrix<T>> {
    let xh = x.sqrt();
    let mut acc = ComplexMatrix::zeros(x.dim());
    for (ainv, &wj) in inverses.iter().zip(w.as_slice()) {
        let z = PdMatrix::from_product(&xh.matrix().congruence(ainv.matrix()))?;
        acc = &acc + &z.log().matrix().scale(&wj);
    }
    Ok(HermitianMatrix::from_symmetrized(&acc))
}

/// `exp(Σ_j w_j log A_j)`.
pub fn log_euclidean_mean<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>) -> Result<PdMatrix<T>> {
    let m = check_family(a, w)?;
    let logs: Vec<HermitianMatrix<T>> = a.iter().map(PdMatrix::log).collect();
    HermitianMatrix::weighted_sum(w.as_slice().iter().copied().zip(logs.iter()), m).exp()
}

/// Settings for [`karcher_mean`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KarcherConfig {
    /// Target Frobenius norm of the Karcher field.
    pub tol: f64,
    pub max_iter: usize,
    /// Inputs with `λ_1/λ_m` above this are rejected.
    pub max_condition: f64,
    /// Smallest step before the solver gives up.
    pub min_step: f64,
}

impl Default for KarcherConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 2000,
            max_condition: 1e12,
            min_step: 1e-6,
        }
    }
}

/// Karcher mean with convergence diagnostics.
#[derive(Clone, Debug)]
pub struct KarcherSolveResult<T> {
    pub mean: PdMatrix<T>,
    /// `‖karcher_field(mean)‖_F`.
    pub residual: T,
    pub iterations: usize,
    /// Residual of every accepted iterate, starting with the initial guess.
    pub residual_history: Vec<f64>,
    pub step_halvings: usize,
    pub final_step: f64,
}

fn check_condition<T: Real>(a: &[PdMatrix<T>], limit: f64) -> Result<()> {
    for x in a {
        let c = x.condition_number().to_f64_lossy();
        if !(c <= limit) {
            return Err(Error::IllConditioned { condition: c, limit });
        }
    }
    Ok(())
}

/// Solves `Σ_j w_j log(X^{1/2}A_j^{−1}X^{1/2}) = 0` by the fixed-point
/// iteration `X ← X^{1/2} exp(−s·F(X)) X^{1/2}`, started at the Log-Euclidean
/// mean. A step that increases the residual is rejected and `s` halved.
pub fn karcher_mean<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>, cfg: &KarcherConfig) -> Result<KarcherSolveResult<T>> {
    check_family(a, w)?;
    check_condition(a, cfg.max_condition)?;
    let inverses: Vec<PdMatrix<T>> = a.iter().map(PdMatrix::inv).collect();
    let tol = T::lit(cfg.tol);

    let mut x = log_euclidean_mean(a, w)?;
    let mut field = field_with_inverses(&x, &inverses, w)?;
    let mut residual = field.matrix().frobenius_norm();
    let mut history = vec![residual.to_f64_lossy()];
    let mut step = T::one();
    let mut halvings = 0;
    let mut iterations = 0;

    while residual > tol {
        if iterations == cfg.max_iter || step < T::lit(cfg.min_step) {
            return Err(Error::SolverNoConvergence {
                solver: "karcher",
                iterations,
                residual: residual.to_f64_lossy(),
                residual_history: history,
            });
        }
        iterations += 1;
        let xh = x.sqrt();
        let trial = |h: T| -> Result<(PdMatrix<T>, HermitianMatrix<T>, T)> {
            let update = field.scale(-h).exp()?;
            let candidate = PdMatrix::from_product(&xh.matrix().congruence(update.matrix()))?;
            let cand_field = field_with_inverses(&candidate, &inverses, w)?;
            let r = cand_field.matrix().frobenius_norm();
            Ok((candidate, cand_field, r))
        };
        // Unit steps overshoot when the inputs are spread out (the Hessian of the
        // Karcher cost grows with their distances), so also try half a step.
        let full = trial(step)?;
        let half = trial(step / T::lit(2.0))?;
        let (best, took_half) = if half.2 < full.2 { (half, true) } else { (full, false) };
        if best.2 < residual {
            (x, field, residual) = best;
            history.push(residual.to_f64_lossy());
            if took_half {
                step = step / T::lit(2.0);
                halvings += 1;
            } else {
                step = (step * T::lit(1.25)).min(T::one());
            }
        } else {
            step = step / T::lit(2.0);
            halvings += 1;
        }
    }

    Ok(KarcherSolveResult {
        mean: x,
        residual,
        iterations,
        residual_history: history,
        step_halvings: halvings,
        final_step: step.to_f64_lossy(),
    })
}

/// Shorthand for the mean only.
pub fn karcher<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>, cfg: &KarcherConfig) -> Result<PdMatrix<T>> {
    Ok(karcher_mean(a, w, cfg)?.mean)
}

/// Settings for [`power_mean`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerMeanConfig {
    /// Target `‖Σ w_j (X #_t A_j) − X‖_F`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerMeanConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 20_000 }
    }
}

/// Power mean `P_{t,ω}`, `t ∈ [−1, 1] \ {0}`. For `t > 0` the fixed point of
/// `X ↦ Σ w_j (X #_t A_j)`; for `t < 0`, `P_{−t,ω}(A_1^{−1}, …, A_n^{−1})^{−1}`.
pub fn power_mean<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>, t: T, cfg: &PowerMeanConfig) -> Result<PdMatrix<T>> {
    check_family(a, w)?;
    if !(t >= -T::one() && t <= T::one()) || t == T::zero() {
        return Err(Error::InvalidParameter(format!("power-mean exponent must lie in [−1, 1] \\ {{0}}, got {t}")));
    }
    if t < T::zero() {
        let inv: Vec<PdMatrix<T>> = a.iter().map(PdMatrix::inv).collect();
        return Ok(power_mean_positive(&inv, w, -t, cfg)?.inv());
    }
    power_mean_positive(a, w, t, cfg)
}

fn power_mean_positive<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>, t: T, cfg: &PowerMeanConfig) -> Result<PdMatrix<T>> {
    let m = a[0].dim();
    let mut x = log_euclidean_mean(a, w)?;
    let mut history = Vec::new();
    for it in 0..=cfg.max_iter {
        let mut next = ComplexMatrix::zeros(m);
        for (aj, &wj) in a.iter().zip(w.as_slice()) {
            next = &next + &weighted_geometric_mean(&x, aj, t)?.matrix().scale(&wj);
        }
        let residual = next.distance(x.matrix());
        history.push(residual.to_f64_lossy());
        x = PdMatrix::from_product(&next)?;
        if residual <= T::lit(cfg.tol) {
            return Ok(x);
        }
        if it == cfg.max_iter {
            break;
        }
    }
    let residual = history.last().copied().unwrap_or(f64::NAN);
    // keep the tail only; the full history can be long
    let keep = history.len().saturating_sub(50);
    Err(Error::SolverNoConvergence {
        solver: "power mean",
        iterations: cfg.max_iter,
        residual,
        residual_history: history.split_off(keep),
    })
}

/// `A^p` entrywise over a family.
pub fn powers<T: Real>(a: &[PdMatrix<T>], p: T) -> Vec<PdMatrix<T>> {
    a.iter().map(|x| x.pow(p)).collect()
}

/// The two log-majorizations for rescaled Karcher means.
#[derive(Clone, Debug, Serialize)]
pub struct RescaledMeanReport<T: Real> {
    /// `λ(G_ω(A^p)^{1/p})`.
    pub high: Spectrum<T>,
    /// `λ(G_ω(A^q)^{1/q})`.
    pub low: Spectrum<T>,
    /// `λ(LE_ω(A))`.
    pub log_euclidean: Spectrum<T>,
    /// `G_ω(A^p)^{1/p} ≺_log G_ω(A^q)^{1/q}`.
    pub monotone: MajorizationReport,
    /// `G_ω(A^p)^{1/p} ≺_log LE_ω(A)`.
    pub upper: MajorizationReport,
}

/// `G_ω(A^p)^{1/p}`.
pub fn rescaled_karcher<T: Real>(a: &[PdMatrix<T>], w: &WeightVector<T>, p: T, cfg: &KarcherConfig) -> Result<PdMatrix<T>> {
    if p == T::zero() {
        return Err(Error::InvalidParameter("rescaling exponent must be non-zero".into()));
    }
    Ok(karcher(&powers(a, p), w, cfg)?.pow(T::one() / p))
}

/// Checks both log-majorizations for `0 < q ≤ p`.
pub fn rescaled_mean_check<T: Real>(
    a: &[PdMatrix<T>],
    w: &WeightVector<T>,
    p: T,
    q: T,
    cfg: &KarcherConfig,
    tol: MajorizationTol,
) -> Result<RescaledMeanReport<T>> {
    check_family(a, w)?;
    if !(q > T::zero() && q <= p) {
        return Err(Error::InvalidParameter(format!("need 0 < q ≤ p, got p = {p}, q = {q}")));
    }
    let high = rescaled_karcher(a, w, p, cfg)?.spectrum();
    let low = if p == q { high.clone() } else { rescaled_karcher(a, w, q, cfg)?.spectrum() };
    let log_euclidean = log_euclidean_mean(a, w)?.spectrum();
    let monotone = check_log_majorization_with(high.as_slice(), low.as_slice(), tol)?;
    let upper = check_log_majorization_with(high.as_slice(), log_euclidean.as_slice(), tol)?;
    Ok(RescaledMeanReport { high, low, log_euclidean, monotone, upper })
}

/// One row of [`lie_trotter_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LieTrotterPoint {
    pub q: f64,
    /// `δ(G_ω(A^q)^{1/q}, LE_ω(A))`.
    pub distance: f64,
}

/// Distances from the rescaled Karcher means to the Log-Euclidean mean along `qs`.
pub fn lie_trotter_scan<T: Real>(
    a: &[PdMatrix<T>],
    w: &WeightVector<T>,
    qs: &[T],
    cfg: &KarcherConfig,
) -> Result<Vec<LieTrotterPoint>> {
    check_family(a, w)?;
    if qs.iter().any(|&q| !(q > T::zero())) || qs.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::InvalidParameter("q sequence must be positive and strictly decreasing".into()));
    }
    let le = log_euclidean_mean(a, w)?;
    qs.iter()
        .map(|&q| {
            let g = rescaled_karcher(a, w, q, cfg)?;
            Ok(LieTrotterPoint {
                q: q.to_f64_lossy(),
                distance: riemannian_distance(&g, &le)?.to_f64_lossy(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::compound_matrix;
    use crate::random::{case_rng, commuting_family, gaussian_matrix, log_uniform_pd};
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn pd(rows: Vec<Vec<f64>>) -> PdMatrix<f64> {
        PdMatrix::from_real_rows(rows).unwrap()
    }

    fn diag(d: &[f64]) -> PdMatrix<f64> {
        PdMatrix::from_real_diagonal(d).unwrap()
    }

    fn family(seed: u64, m: usize, n: usize) -> Vec<PdMatrix<f64>> {
        let mut rng = case_rng(seed, 0);
        (0..n).map(|_| log_uniform_pd(m, 1.0, &mut rng)).collect()
    }

    fn close(a: &PdMatrix<f64>, b: &PdMatrix<f64>, tol: f64) -> bool {
        a.matrix().distance(b.matrix()) <= tol * (1.0 + b.matrix().frobenius_norm())
    }

    #[test]
    fn weights_are_validated() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(WeightVector::<f64>::new(vec![]).is_err());
        let w = WeightVector::normalized(vec![1.0, 3.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
    }

    #[test]
    fn two_variable_mean() {
        let a = pd(vec![vec![2.0, 1.0], vec![1.0, 1.0]]);
        let b = diag(&[3.0, 0.5]);
        assert!(close(&geometric_mean_two(&a, &b, 0.0).unwrap(), &a, 0.0));
        assert!(close(&geometric_mean_two(&a, &b, 1.0).unwrap(), &b, 0.0));
        let g = geometric_mean_two(&diag(&[4.0, 9.0]), &PdMatrix::identity(2), 0.5).unwrap();
        assert!(close(&g, &diag(&[2.0, 3.0]), 1e-14));
        let g = geometric_mean_two(&a, &PdMatrix::identity(2), 0.5).unwrap();
        assert!(close(&g, &a.sqrt(), 1e-14));
        assert!(geometric_mean_two(&a, &b, 1.5).is_err());
    }

    #[test]
    fn distance_examples() {
        let a = pd(vec![vec![2.0, 1.0], vec![1.0, 1.0]]);
        assert!(riemannian_distance(&a, &a).unwrap() < 1e-14);
        let d = riemannian_distance(&PdMatrix::identity(2), &diag(&[E * E, 1.0 / (E * E)])).unwrap();
        assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let f = family(1, 3, 2);
        let (x, y) = (riemannian_distance(&f[0], &f[1]).unwrap(), riemannian_distance(&f[1], &f[0]).unwrap());
        assert!((x - y).abs() < 1e-13);
    }

    #[test]
    fn field_examples() {
        let a = pd(vec![vec![2.0, 1.0], vec![1.0, 1.0]]);
        let w1 = WeightVector::uniform(1);
        assert!(karcher_field(&a, std::slice::from_ref(&a), &w1).unwrap().matrix().frobenius_norm() < 1e-14);
        let w3 = WeightVector::uniform(3);
        let same = vec![a.clone(), a.clone(), a.clone()];
        assert!(karcher_field(&a, &same, &w3).unwrap().matrix().frobenius_norm() < 1e-14);
        let ds = vec![diag(&[2.0, 3.0]), diag(&[5.0, 0.5])];
        let w = WeightVector::new(vec![0.25, 0.75]).unwrap();
        let f = karcher_field(&PdMatrix::identity(2), &ds, &w).unwrap();
        let expected = [-(0.25 * 2f64.ln() + 0.75 * 5f64.ln()), -(0.25 * 3f64.ln() + 0.75 * 0.5f64.ln())];
        assert!((f.matrix()[(0, 0)].re - expected[0]).abs() < 1e-14);
        assert!((f.matrix()[(1, 1)].re - expected[1]).abs() < 1e-14);
    }

    #[test]
    fn karcher_examples() {
        let cfg = KarcherConfig::default();
        let f = family(2, 3, 2);
        for alpha in [0.2, 0.5, 0.9] {
            let w = WeightVector::new(vec![1.0 - alpha, alpha]).unwrap();
            let r = karcher_mean(&f, &w, &cfg).unwrap();
            assert!(r.residual <= 1e-12);
            assert!(close(&r.mean, &geometric_mean_two(&f[0], &f[1], alpha).unwrap(), 1e-10));
        }
        let same = vec![f[0].clone(); 3];
        assert!(close(&karcher(&same, &WeightVector::uniform(3), &cfg).unwrap(), &f[0], 1e-12));
        let ds = vec![diag(&[2.0, 3.0]), diag(&[5.0, 0.5]), diag(&[1.0, 7.0])];
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let r = karcher_mean(&ds, &w, &cfg).unwrap();
        assert_eq!(r.iterations, 0);
        let expected: Vec<f64> = (0..2)
            .map(|i| ds.iter().zip(w.as_slice()).map(|(d, &wj)| d.matrix()[(i, i)].re.powf(wj)).product())
            .collect();
        assert!(close(&r.mean, &diag(&expected), 1e-13));
    }

    fn cost(x: &PdMatrix<f64>, a: &[PdMatrix<f64>]) -> f64 {
        a.iter().map(|aj| riemannian_distance(x, aj).unwrap().powi(2)).sum::<f64>() / a.len() as f64
    }

    #[test]
    fn karcher_minimizes_cost_oracle() {
        // coordinate search on real symmetric 2×2 X = [[p, r], [r, q]], independent of the field
        let a = vec![
            pd(vec![vec![2.0, 0.5], vec![0.5, 1.0]]),
            pd(vec![vec![1.0, -0.3], vec![-0.3, 3.0]]),
            pd(vec![vec![0.5, 0.1], vec![0.1, 0.8]]),
        ];
        let g = karcher(&a, &WeightVector::uniform(3), &KarcherConfig::default()).unwrap();
        let mut x = [1.0, 1.0, 0.0];
        let to_pd = |x: &[f64; 3]| PdMatrix::from_real_rows(vec![vec![x[0], x[2]], vec![x[2], x[1]]]);
        let mut h = 0.25;
        let mut best = cost(&to_pd(&x).unwrap(), &a);
        while h > 1e-9 {
            let mut improved = false;
            for i in 0..3 {
                for s in [-1.0, 1.0] {
                    let mut y = x;
                    y[i] += s * h;
                    if let Ok(p) = to_pd(&y) {
                        let c = cost(&p, &a);
                        if c < best {
                            best = c;
                            x = y;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                h /= 2.0;
            }
        }
        let brute = to_pd(&x).unwrap();
        assert!(close(&g, &brute, 1e-5), "{:?} vs {:?}", g.matrix(), brute.matrix());
    }

    #[test]
    fn log_euclidean_examples() {
        let f = family(3, 3, 2);
        assert!(close(&log_euclidean_mean(&f[..1], &WeightVector::uniform(1)).unwrap(), &f[0], 1e-13));
        let mut rng = case_rng(4, 0);
        let c: Vec<PdMatrix<f64>> = commuting_family(3, 3, 1.0, 0.0, &mut rng)
            .into_iter()
            .map(|x| PdMatrix::new(x).unwrap())
            .collect();
        let w = WeightVector::uniform(3);
        let cfg = KarcherConfig::default();
        assert!(close(&log_euclidean_mean(&c, &w).unwrap(), &karcher(&c, &w, &cfg).unwrap(), 1e-12));
        let w2 = WeightVector::uniform(2);
        let d = riemannian_distance(&log_euclidean_mean(&f, &w2).unwrap(), &karcher(&f, &w2, &cfg).unwrap()).unwrap();
        assert!(d > 1e-6);
    }

    #[test]
    fn power_mean_examples() {
        let f = family(5, 3, 3);
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let cfg = PowerMeanConfig::default();
        let arith = PdMatrix::from_product(&ComplexMatrix::weighted_sum(
            w.as_slice().iter().copied().zip(f.iter().map(|x| x.matrix())),
            3,
        ))
        .unwrap();
        assert!(close(&power_mean(&f, &w, 1.0, &cfg).unwrap(), &arith, 1e-12));
        let inv: Vec<PdMatrix<f64>> = f.iter().map(PdMatrix::inv).collect();
        let harm = PdMatrix::from_product(&ComplexMatrix::weighted_sum(
            w.as_slice().iter().copied().zip(inv.iter().map(|x| x.matrix())),
            3,
        ))
        .unwrap()
        .inv();
        assert!(close(&power_mean(&f, &w, -1.0, &cfg).unwrap(), &harm, 1e-12));
        assert!(power_mean(&f, &w, 0.0, &cfg).is_err());

        let g = karcher(&f, &w, &KarcherConfig::default()).unwrap();
        let mut last = f64::INFINITY;
        for t in [0.5, 0.25, 0.1, 0.05] {
            let d = riemannian_distance(&power_mean(&f, &w, t, &cfg).unwrap(), &g).unwrap();
            assert!(d < last, "t = {t}: {d} ≥ {last}");
            last = d;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn rescaled_mean_examples() {
        let cfg = KarcherConfig::default();
        let tol = MajorizationTol::uniform(1e-8);
        let mut rng = case_rng(6, 0);
        let c: Vec<PdMatrix<f64>> = commuting_family(3, 3, 1.0, 0.0, &mut rng)
            .into_iter()
            .map(|x| PdMatrix::new(x).unwrap())
            .collect();
        let w = WeightVector::uniform(3);
        let r = rescaled_mean_check(&c, &w, 2.0, 1.0, &cfg, tol).unwrap();
        assert!(r.monotone.holds && r.upper.holds);
        assert!(r.monotone.margins.iter().all(|x| x.abs() < 1e-9));
        let f = family(7, 3, 3);
        let r = rescaled_mean_check(&f, &w, 1.5, 1.5, &cfg, tol).unwrap();
        assert!(r.monotone.margins.iter().all(|&x| x == 0.0));
        let r = rescaled_mean_check(&f, &w, 2.0, 1.0, &cfg, tol).unwrap();
        assert!(r.monotone.holds && r.upper.holds);
        assert!(r.monotone.margins[0] > 0.0);
    }

    #[test]
    fn lie_trotter_examples() {
        let cfg = KarcherConfig::default();
        let f = family(8, 3, 2);
        let w = WeightVector::uniform(2);
        let scan = lie_trotter_scan(&f, &w, &[1.0, 0.5, 0.1, 0.01], &cfg).unwrap();
        assert!(scan.windows(2).all(|p| p[1].distance < p[0].distance));
        assert!(scan[3].distance < 1e-3);
        let one = lie_trotter_scan(&f[..1], &WeightVector::uniform(1), &[1.0, 0.1], &cfg).unwrap();
        assert!(one.iter().all(|p| p.distance < 1e-12));
        assert!(lie_trotter_scan(&f, &w, &[0.1, 0.5], &cfg).is_err());
    }

    #[test]
    fn karcher_invariances() {
        let cfg = KarcherConfig::default();
        let f = family(9, 3, 3);
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let g = karcher(&f, &w, &cfg).unwrap();

        let order = [2, 0, 1];
        let permuted: Vec<PdMatrix<f64>> = order.iter().map(|&i| f[i].clone()).collect();
        assert!(close(&karcher(&permuted, &w.permuted(&order), &cfg).unwrap(), &g, 1e-10));

        let mut rng = case_rng(9, 1);
        let m = &ComplexMatrix::identity(3) + &gaussian_matrix::<f64, _>(3, &mut rng).scale(&0.3);
        let conj: Vec<PdMatrix<f64>> = f.iter().map(|x| x.congruence(&m.adjoint()).unwrap()).collect();
        let lhs = karcher(&conj, &w, &cfg).unwrap();
        assert!(close(&lhs, &g.congruence(&m.adjoint()).unwrap(), 1e-8));

        let inv: Vec<PdMatrix<f64>> = f.iter().map(PdMatrix::inv).collect();
        assert!(close(&karcher(&inv, &w, &cfg).unwrap().inv(), &g, 1e-8));
    }

    #[test]
    fn karcher_commutes_with_compounds() {
        let cfg = KarcherConfig::default();
        let f = family(10, 4, 3);
        let w = WeightVector::uniform(3);
        let g = karcher(&f, &w, &cfg).unwrap();
        let gk = compound_matrix(g.matrix(), 2).unwrap();
        let fk: Vec<PdMatrix<f64>> = f
            .iter()
            .map(|x| PdMatrix::from_product(&compound_matrix(x.matrix(), 2).unwrap()).unwrap())
            .collect();
        let rhs = karcher(&fk, &w, &cfg).unwrap();
        assert!(gk.distance(rhs.matrix()) <= 1e-7 * (1.0 + gk.frobenius_norm()));
    }

    #[test]
    fn ill_conditioned_input_rejected() {
        // PD already caps the condition number at 1/RANK_TOL, so lower the limit
        let a = vec![diag(&[1.0, 1e-8]), diag(&[1.0, 1.0])];
        let cfg = KarcherConfig { max_condition: 1e6, ..KarcherConfig::default() };
        let err = karcher_mean(&a, &WeightVector::uniform(2), &cfg).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { .. }));
    }

    #[test]
    fn max_iter_error_carries_history() {
        let f = family(11, 3, 3);
        let cfg = KarcherConfig { max_iter: 1, tol: 1e-30, ..KarcherConfig::default() };
        match karcher_mean(&f, &WeightVector::uniform(3), &cfg).unwrap_err() {
            Error::SolverNoConvergence { residual_history, .. } => assert!(!residual_history.is_empty()),
            e => panic!("unexpected {e}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn yamazaki_spot_check(seed in any::<u64>()) {
            let f = family(seed, 3, 3);
            let w = WeightVector::uniform(3);
            let cfg = KarcherConfig::default();
            let g = karcher(&f, &w, &cfg).unwrap();
            let top = g.spectrum().largest();
            let scaled: Vec<PdMatrix<f64>> = f.iter().map(|x| PdMatrix::from_product(&x.matrix().scale(&(1.0 / top))).unwrap()).collect();
            for p in [1.5, 2.0, 3.0] {
                let gp = karcher(&powers(&scaled, p), &w, &cfg).unwrap();
                prop_assert!(gp.spectrum().largest() <= 1.0 + 1e-8);
            }
        }

        #[test]
        fn karcher_residual_history_decreases(seed in any::<u64>(), m in 2usize..=4, n in 2usize..=4) {
            let f = family(seed, m, n);
            let r = karcher_mean(&f, &WeightVector::uniform(n), &KarcherConfig::default()).unwrap();
            prop_assert!(r.residual <= 1e-12);
            prop_assert!(r.residual_history.windows(2).all(|p| p[1] < p[0]));
        }
    }
}
