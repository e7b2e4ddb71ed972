//! Taylor coefficients of `t ↦ G_ω(e^{tH_1}, …, e^{tH_n})` at `t = 0`, the
//! equality-case conditions for the Karcher/Log-Euclidean norm inequality, and
//! the Lie–Trotter–Kato limit for singular pairs.
//!
//! Writing `X(t) = Y(t)²` and `Z_j(t) = Y(t)e^{−tH_j}Y(t)`, the Karcher
//! equation `Σ w_j log Z_j(t) = 0` determines the coefficients `Y_k`, `Z_{k,j}`
//! order by order. The recursion only needs field operations, so it runs over
//! exact rationals as well as floats.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{projection_meet, ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix, UnitarilyInvariantNorm, RANK_TOL};
use crate::means::{karcher, log_euclidean_mean, riemannian_distance, KarcherConfig, WeightVector};
use crate::scalar::{Field, Real};
use crate::BigRational;

/// Largest order accepted by [`taylor_recursion`]; the composition sums grow like `2^K`.
pub const MAX_ORDER: usize = 8;

/// Coefficients of `X(t)`, `Y(t) = X(t)^{1/2}` and `Z_j(t)` up to order `K`.
/// Every vector is indexed from `0`, where the coefficient is `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorState<T> {
    pub order: usize,
    pub x: Vec<ComplexMatrix<T>>,
    pub y: Vec<ComplexMatrix<T>>,
    /// `z[k][j] = Z_{k,j}`.
    pub z: Vec<Vec<ComplexMatrix<T>>>,
    /// `H^{(k)} = Σ_j w_j H_j^k`.
    pub h_moments: Vec<ComplexMatrix<T>>,
    /// `Z^{(k)} = Σ_j w_j Z_{k,j}`.
    pub z_sums: Vec<ComplexMatrix<T>>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_family<T: Field>(hs: &[ComplexMatrix<T>], w: &[T]) -> Result<usize> {
    let first = hs.first().ok_or_else(|| Error::InvalidParameter("need at least one matrix".into()))?;
    if hs.len() != w.len() {
        return Err(Error::DimensionMismatch(hs.len(), w.len()));
    }
    let m = first.dim();
    if let Some(h) = hs.iter().find(|h| h.dim() != m) {
        return Err(Error::DimensionMismatch(m, h.dim()));
    }
    if w.iter().any(|x| !(*x > T::zero())) {
        return Err(Error::InvalidParameter("weights must be positive".into()));
    }
    let total = w.iter().fold(T::zero(), |acc, x| acc + x.clone());
    if (total.to_f64_lossy() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("weights sum to {}, not 1", total.to_f64_lossy())));
    }
    Ok(m)
}

fn weighted<T: Field>(terms: impl Iterator<Item = (T, ComplexMatrix<T>)>, m: usize) -> ComplexMatrix<T> {
    terms.fold(ComplexMatrix::zeros(m), |acc, (c, x)| &acc + &x.scale(&c))
}

/// `Σ_{r=0}^{k−l} Y_r M Y_{k−l−r}`.
fn sandwich_sum<T: Field>(y: &[ComplexMatrix<T>], mid: &ComplexMatrix<T>, span: usize) -> ComplexMatrix<T> {
    (0..=span).fold(ComplexMatrix::zeros(mid.dim()), |acc, r| {
        &acc + &y[r].matmul(mid).matmul(&y[span - r])
    })
}

/// `Σ_{r=1}^{k−1} Y_r Y_{k−r}`.
fn inner_square<T: Field>(y: &[ComplexMatrix<T>], k: usize, m: usize) -> ComplexMatrix<T> {
    (1..k).fold(ComplexMatrix::zeros(m), |acc, r| &acc + &y[r].matmul(&y[k - r]))
}

/// Runs the coefficient recursion to order `order` for Hermitian `hs` and
/// positive weights `w` summing to one. Inputs are not checked for Hermitian
/// symmetry, so exact callers can pass rational matrices directly.
pub fn taylor_recursion<T: Field>(hs: &[ComplexMatrix<T>], w: &[T], order: usize) -> Result<TaylorState<T>> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("order must lie in 1..={MAX_ORDER}, got {order}")));
    }
    let m = check_family(hs, w)?;
    let n = hs.len();
    let id = ComplexMatrix::identity(m);
    let ratio = |num: i64, den: i64| T::from_ratio(num, den);

    // powers[j][l] = H_j^l
    let powers: Vec<Vec<ComplexMatrix<T>>> = hs
        .iter()
        .map(|h| {
            let mut p = vec![id.clone()];
            for l in 1..=order {
                let next = p[l - 1].matmul(h);
                p.push(next);
            }
            p
        })
        .collect();
    let h_moments: Vec<ComplexMatrix<T>> = (0..=order)
        .map(|l| weighted((0..n).map(|j| (w[j].clone(), powers[j][l].clone())), m))
        .collect();

    let mut y = vec![id.clone(), h_moments[1].scale(&ratio(1, 2))];
    let mut z: Vec<Vec<ComplexMatrix<T>>> = vec![vec![id.clone(); n]];
    z.push((0..n).map(|j| &y[1].scale(&ratio(2, 1)) - &hs[j]).collect());
    let mut z_sums = vec![id.clone(), ComplexMatrix::zeros(m)];

    for k in 2..=order {
        // compositions of k into r ≥ 2 parts, summed as S_r(k) = Σ_{k1} Z_{k1} S_{r−1}(k − k1)
        let mut zk = ComplexMatrix::zeros(m);
        for j in 0..n {
            // s[r][q] = Σ over compositions of q into r parts of Z_{q1,j}⋯Z_{qr,j}
            let mut s: Vec<Vec<ComplexMatrix<T>>> = vec![vec![ComplexMatrix::zeros(m); k + 1]; k + 1];
            for q in 1..k {
                s[1][q] = z[q][j].clone();
            }
            for r in 2..=k {
                for q in r..=k {
                    let mut acc = ComplexMatrix::zeros(m);
                    for first in 1..=q - (r - 1) {
                        acc = &acc + &z[first][j].matmul(&s[r - 1][q - first]);
                    }
                    s[r][q] = acc;
                }
            }
            let mut term = ComplexMatrix::zeros(m);
            for (r, sr) in s.iter().enumerate().skip(2) {
                term = &term + &sr[k].scale(&ratio(sign(r), r as i64));
            }
            zk = &zk + &term.scale(&w[j]);
        }

        let square = inner_square(&y, k, m);
        let mut mixed = ComplexMatrix::zeros(m);
        for l in 1..=k {
            let c = ratio(sign(l), factorial(l));
            mixed = &mixed + &sandwich_sum(&y, &h_moments[l], k - l).scale(&c);
        }
        let two_yk = &(&zk - &square) - &mixed;
        y.push(two_yk.scale(&ratio(1, 2)));

        let zkj: Vec<ComplexMatrix<T>> = (0..n)
            .map(|j| {
                let mut acc = &y[k].scale(&ratio(2, 1)) + &square;
                for l in 1..=k {
                    let c = ratio(sign(l), factorial(l));
                    acc = &acc + &sandwich_sum(&y, &powers[j][l], k - l).scale(&c);
                }
                acc
            })
            .collect();
        z.push(zkj);
        z_sums.push(zk);
    }

    let x = (0..=order)
        .map(|k| (0..=k).fold(ComplexMatrix::zeros(m), |acc, l| &acc + &y[l].matmul(&y[k - l])))
        .collect();
    Ok(TaylorState { order, x, y, z, h_moments, z_sums })
}

/// [`taylor_recursion`] for Hermitian `f64`-like inputs.
pub fn taylor_coefficients<T: Real>(hs: &[HermitianMatrix<T>], w: &WeightVector<T>, order: usize) -> Result<TaylorState<T>> {
    let raw: Vec<ComplexMatrix<T>> = hs.iter().map(|h| h.matrix().clone()).collect();
    taylor_recursion(&raw, w.as_slice(), order)
}

/// Closed forms of `X_1..X_4` and `Y_1..Y_4` (index `k − 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForms<T> {
    pub x: [ComplexMatrix<T>; 4],
    pub y: [ComplexMatrix<T>; 4],
}

/// Explicit polynomial expressions for the first four coefficients in
/// `H^{(1)}`, `H^{(2)}` and the sandwiches `Σ w_j H_j H^{(1)} H_j`.
pub fn closed_form_coefficients<T: Field>(hs: &[ComplexMatrix<T>], w: &[T]) -> Result<ClosedForms<T>> {
    let m = check_family(hs, w)?;
    let r = |num: i64, den: i64| T::from_ratio(num, den);
    let h1 = weighted(w.iter().cloned().zip(hs.iter().cloned()), m);
    let h2 = weighted(w.iter().cloned().zip(hs.iter().map(|h| h.matmul(h))), m);
    let h1h1 = h1.matmul(&h1);
    let h1h2 = h1.matmul(&h2);
    let h2h1 = h2.matmul(&h1);
    let h1_cubed = h1h1.matmul(&h1);
    let h1_fourth = h1h1.matmul(&h1h1);
    let hj_h1_hj = weighted(w.iter().cloned().zip(hs.iter().map(|h| h.matmul(&h1).matmul(h))), m);
    let h1_hj_h1_hj = weighted(w.iter().cloned().zip(hs.iter().map(|h| h1.matmul(h).matmul(&h1).matmul(h))), m);
    let hj_h1_hj_h1 = weighted(w.iter().cloned().zip(hs.iter().map(|h| h.matmul(&h1).matmul(h).matmul(&h1))), m);
    let h1h1_h2 = h1h1.matmul(&h2);
    let h1_h2_h1 = h1.matmul(&h2h1);
    let h2_h1h1 = h2.matmul(&h1h1);

    let lin = |terms: &[(T, &ComplexMatrix<T>)]| weighted(terms.iter().map(|(c, x)| (c.clone(), (*x).clone())), m);
    let half = r(1, 2);

    let two_y1 = h1.clone();
    let two_y2 = h1h1.scale(&r(1, 4));
    let two_y3 = lin(&[(r(1, 24), &h1_cubed), (r(-1, 12), &h1h2), (r(-1, 12), &h2h1), (r(1, 6), &hj_h1_hj)]);
    let two_y4 = lin(&[
        (r(1, 192), &h1_fourth),
        (r(-1, 48), &h1h1_h2),
        (r(-1, 24), &h1_h2_h1),
        (r(-1, 48), &h2_h1h1),
        (r(1, 24), &h1_hj_h1_hj),
        (r(1, 24), &hj_h1_hj_h1),
    ]);
    let x1 = h1.clone();
    let x2 = h1h1.scale(&half);
    let x3 = lin(&[(r(1, 6), &h1_cubed), (r(-1, 12), &h1h2), (r(-1, 12), &h2h1), (r(1, 6), &hj_h1_hj)]);
    let x4 = lin(&[
        (r(1, 24), &h1_fourth),
        (r(-1, 24), &h1h1_h2),
        (r(-2, 24), &h1_h2_h1),
        (r(-1, 24), &h2_h1h1),
        (r(2, 24), &h1_hj_h1_hj),
        (r(2, 24), &hj_h1_hj_h1),
    ]);
    Ok(ClosedForms {
        x: [x1, x2, x3, x4],
        y: [two_y1.scale(&half), two_y2.scale(&half), two_y3.scale(&half), two_y4.scale(&half)],
    })
}

/// Trace identities of the coefficients against those of `e^{tH^{(1)}}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceIdentities {
    /// `Tr X_k − Tr(H^{(1)})^k/k!` for `k = 1..=order`.
    pub defects: Vec<f64>,
    /// `(1/24)(−4 Tr(H^{(1)})²H^{(2)} + 4 Σ w_j Tr H^{(1)}H_jH^{(1)}H_j)`.
    pub quartic_trace_form: f64,
    /// `Σ w_j ‖[H^{(1)}, H_j]‖_F²`.
    pub commutator_energy: f64,
}

/// Evaluates [`TraceIdentities`] from a float Taylor state.
pub fn trace_identities<T: Real>(hs: &[HermitianMatrix<T>], w: &WeightVector<T>, state: &TaylorState<T>) -> TraceIdentities {
    let m = hs[0].dim();
    let h1 = &state.h_moments[1];
    let h2 = &state.h_moments[2];
    let mut power = ComplexMatrix::identity(m);
    let defects = (1..=state.order)
        .map(|k| {
            power = power.matmul(h1);
            let exp_coeff = power.trace().re / T::lit(factorial(k) as f64);
            (state.x[k].trace().re - exp_coeff).to_f64_lossy()
        })
        .collect();
    let mut sandwich = T::zero();
    let mut energy = T::zero();
    for (h, &wj) in hs.iter().zip(w.as_slice()) {
        let hm = h.matrix();
        sandwich = sandwich + wj * h1.matmul(hm).matmul(h1).matmul(hm).trace().re;
        energy = energy + wj * h1.commutator(hm).frobenius_norm().powi(2);
    }
    let four = T::lit(4.0);
    let quartic = (-four * h1.matmul(h1).matmul(h2).trace().re + four * sandwich) / T::lit(24.0);
    TraceIdentities {
        defects,
        quartic_trace_form: quartic.to_f64_lossy(),
        commutator_energy: energy.to_f64_lossy(),
    }
}

/// Inverse of the integer Vandermonde matrix `[i^k]` for nodes `i = −p..=p`,
/// computed exactly and rounded once. Row `k` maps node values to the
/// coefficient of `t^k` of the interpolating polynomial.
fn vandermonde_inverse(p: i64) -> Vec<Vec<f64>> {
    let nodes: Vec<i64> = (-p..=p).collect();
    let size = nodes.len();
    let q = |x: i64| BigRational::from_integer(x.into());
    let mut a: Vec<Vec<BigRational>> = nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            (0..size as u32)
                .map(|k| q(x.pow(k)))
                .chain((0..size).map(|c| q((c == i) as i64)))
                .collect()
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero()).expect("Vandermonde matrix is invertible");
        a.swap(col, pivot);
        let inv = BigRational::one() / a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
    }
    a.iter().map(|row| row[size..].iter().map(Field::to_f64_lossy).collect()).collect()
}

/// Finite-difference estimates of `X_1..X_K`.
#[derive(Clone, Debug)]
pub struct FiniteDifferenceTaylor<T> {
    pub h: f64,
    /// `coeffs[k − 1] ≈ X_k`.
    pub coeffs: Vec<ComplexMatrix<T>>,
    /// Frobenius distance between the 9-point and 7-point estimates.
    pub error_estimates: Vec<f64>,
}

/// Central-difference oracle: samples `X(t)` at `t = 0, ±h, …, ±4h` with the
/// Karcher solver and reads `X_k` off the interpolating polynomial, which is
/// the Richardson-extrapolated central difference of order `k`.
pub fn finite_difference_taylor<T: Real>(
    hs: &[HermitianMatrix<T>],
    w: &WeightVector<T>,
    order: usize,
    h: f64,
    cfg: &KarcherConfig,
) -> Result<FiniteDifferenceTaylor<T>> {
    if order == 0 || order > 4 {
        return Err(Error::InvalidParameter(format!("finite differences support orders 1..=4, got {order}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let eigs = hs.iter().map(|x| x.eig()).collect::<Result<Vec<_>>>()?;
    let sample = |i: i64| -> Result<ComplexMatrix<T>> {
        let t = T::lit(h * i as f64);
        let family = eigs
            .iter()
            .map(|e| PdMatrix::from_matrix(e.reconstruct(|l| (t * l).exp())))
            .collect::<Result<Vec<_>>>()?;
        Ok(karcher(&family, w, cfg)?.matrix().clone())
    };
    let values: Vec<ComplexMatrix<T>> = (-4..=4).map(sample).collect::<Result<_>>()?;
    let fit = |p: i64, k: usize| -> ComplexMatrix<T> {
        let rows = vandermonde_inverse(p);
        let offset = (4 - p) as usize;
        let scale = h.powi(k as i32);
        let terms = rows[k].iter().enumerate().map(|(i, &c)| (T::lit(c / scale), &values[offset + i]));
        ComplexMatrix::weighted_sum(terms, hs[0].dim())
    };
    let mut coeffs = Vec::with_capacity(order);
    let mut error_estimates = Vec::with_capacity(order);
    for k in 1..=order {
        let fine = fit(4, k);
        let coarse = fit(3, k);
        error_estimates.push((&fine - &coarse).frobenius_norm().to_f64_lossy());
        coeffs.push(fine);
    }
    Ok(FiniteDifferenceTaylor { h, coeffs, error_estimates })
}

/// Settings for [`equality_case_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityCaseConfig {
    pub eq_tol: f64,
    /// Nonzero `t` at which the norm conditions are evaluated.
    pub t_probe: f64,
    /// Grid for the monotonicity probe of `t ↦ ‖G_ω(A^t)^{1/t}‖`.
    pub probe_grid: Vec<f64>,
    pub karcher: KarcherConfig,
}

impl Default for EqualityCaseConfig {
    fn default() -> Self {
        Self {
            eq_tol: 1e-7,
            t_probe: 0.5,
            probe_grid: log_grid(0.1, 4.0, 12),
            karcher: KarcherConfig::default(),
        }
    }
}

/// `n` points spaced evenly in `log t` on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

/// A condition verdict with the quantity it was decided on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Verdict {
    fn at_most(value: f64, threshold: f64) -> Self {
        Self { holds: value <= threshold, value, threshold }
    }
}

/// Samples of `t ↦ ‖G_ω(A^t)^{1/t}‖`, which never increases for `t > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityProbe {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest decrease between consecutive samples.
    pub max_drop: f64,
    /// Largest increase between consecutive samples.
    pub max_rise: f64,
    /// Some increase exceeds `eq_tol`: contradicts monotonicity.
    pub non_decrease: bool,
    /// Every consecutive drop is below `eq_tol`.
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityCaseReport {
    /// Every `A_j` commutes with `LE_ω(A)`.
    pub a: Verdict,
    /// `G_ω(A^t) = LE_ω(A^t)` at `t ∈ {±1, ±t_probe}`, by Riemannian distance.
    pub b: Verdict,
    /// `‖G_ω(A^t)‖ = ‖LE_ω(A^t)‖` at `t_probe`.
    pub c: Verdict,
    /// `‖G_ω(A^t)^{1/t}‖ = ‖LE_ω(A)‖` at `t_probe`.
    pub d: Verdict,
    pub e: MonotonicityProbe,
    /// The four verdicts agree.
    pub consistent: bool,
}

/// Evaluates the four equivalent equality conditions and the monotonicity probe.
pub fn equality_case_check<T: Real>(
    a: &[PdMatrix<T>],
    w: &WeightVector<T>,
    norm: UnitarilyInvariantNorm,
    cfg: &EqualityCaseConfig,
) -> Result<EqualityCaseReport> {
    let norm = norm.validate()?;
    if !norm.is_strictly_increasing() {
        return Err(Error::InvalidParameter("equality conditions need a strictly increasing norm".into()));
    }
    if cfg.t_probe == 0.0 || !cfg.t_probe.is_finite() {
        return Err(Error::InvalidParameter("probe t must be finite and nonzero".into()));
    }
    if !(cfg.eq_tol > 0.0) {
        return Err(Error::InvalidParameter("eq_tol must be positive".into()));
    }
    let tol = cfg.eq_tol;
    let le = log_euclidean_mean(a, w)?;
    let logs: Vec<HermitianMatrix<T>> = a.iter().map(PdMatrix::log).collect();
    let eigs = logs.iter().map(|h| h.eig()).collect::<Result<Vec<_>>>()?;
    let at = |t: f64| -> Result<Vec<PdMatrix<T>>> {
        let t = T::lit(t);
        eigs.iter().map(|e| PdMatrix::from_matrix(e.reconstruct(|l| (t * l).exp()))).collect()
    };

    let le_f = le.matrix().frobenius_norm();
    let comm = a
        .iter()
        .map(|x| {
            let scale = T::one().max(x.matrix().frobenius_norm() * le_f);
            (x.matrix().commutator(le.matrix()).frobenius_norm() / scale).to_f64_lossy()
        })
        .fold(0.0, f64::max);
    let cond_a = Verdict::at_most(comm, tol);

    let mut dist: f64 = 0.0;
    for t in [1.0, -1.0, cfg.t_probe, -cfg.t_probe] {
        let family = at(t)?;
        let g = karcher(&family, w, &cfg.karcher)?;
        let l = log_euclidean_mean(&family, w)?;
        dist = dist.max(riemannian_distance(&g, &l)?.to_f64_lossy());
    }
    let cond_b = Verdict::at_most(dist, tol);

    let tp = cfg.t_probe;
    let family = at(tp)?;
    let g = karcher(&family, w, &cfg.karcher)?;
    let le_t = log_euclidean_mean(&family, w)?;
    let ng = norm.of(g.matrix())?.to_f64_lossy();
    let nl = norm.of(le_t.matrix())?.to_f64_lossy();
    let cond_c = Verdict::at_most((ng - nl).abs() / nl.max(1.0), tol);

    let rescaled = |g: &PdMatrix<T>, t: f64| -> Result<f64> {
        Ok(norm.of(g.pow(T::lit(1.0 / t)).matrix())?.to_f64_lossy())
    };
    let nd = rescaled(&g, tp)?;
    let nle = norm.of(le.matrix())?.to_f64_lossy();
    let cond_d = Verdict::at_most((nd - nle).abs() / nle.max(1.0), tol);

    let mut values = Vec::with_capacity(cfg.probe_grid.len());
    for &t in &cfg.probe_grid {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter("probe grid must be positive".into()));
        }
        let g = karcher(&at(t)?, w, &cfg.karcher)?;
        values.push(rescaled(&g, t)?);
    }
    let diffs: Vec<f64> = values.windows(2).map(|p| p[1] - p[0]).collect();
    let max_drop = diffs.iter().map(|d| -d).fold(0.0, f64::max);
    let max_rise = diffs.iter().copied().fold(0.0, f64::max);
    let probe = MonotonicityProbe {
        non_decrease: max_rise > tol * nle.max(1.0),
        flat: max_drop <= tol * nle.max(1.0),
        t: cfg.probe_grid.clone(),
        values,
        max_drop,
        max_rise,
    };

    let v = [cond_a.holds, cond_b.holds, cond_c.holds, cond_d.holds];
    Ok(EqualityCaseReport {
        a: cond_a,
        b: cond_b,
        c: cond_c,
        d: cond_d,
        e: probe,
        consistent: v.iter().all(|&x| x == v[0]),
    })
}

/// One row of the Lie–Trotter–Kato error table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LtkRow {
    pub t: f64,
    /// `‖(A^{t/2}B^tA^{t/2})^{1/t} − target‖_F`.
    pub error: f64,
}

#[derive(Clone, Debug)]
pub struct LtkReport<T> {
    /// `P_0 exp(P_0 log A P_0 + P_0 log B P_0)`, `P_0 = A⁰ ∧ B⁰`.
    pub target: ComplexMatrix<T>,
    /// The product at the smallest `t`.
    pub limit_estimate: ComplexMatrix<T>,
    pub rows: Vec<LtkRow>,
    /// Errors strictly decrease along the sequence.
    pub decreasing: bool,
    /// Every error is below `1e-12·max(1, ‖target‖_F)`.
    pub exact: bool,
}

/// Default sequence `2^{−k}`, `k = 1..=10`.
pub fn default_ltk_sequence() -> Vec<f64> {
    (1..=10).map(|k| 0.5f64.powi(k)).collect()
}

/// `P_0 exp(P_0 log A P_0 + P_0 log B P_0)` with logarithms taken on supports.
pub fn ltk_target<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>) -> Result<ComplexMatrix<T>> {
    let p0 = projection_meet(&a.support_projection(), &b.support_projection())?;
    let p = p0.matrix();
    let inner = &p.matmul(a.log_on_support().matrix()).matmul(p) + &p.matmul(b.log_on_support().matrix()).matmul(p);
    let e = HermitianMatrix::from_symmetrized(&inner).exp()?;
    Ok(p.matmul(e.matrix()))
}

/// `(A^{t/2}B^tA^{t/2})^{1/t}` with support powers.
///
/// The inner product is `I + O(t)`; stored as is it keeps only about
/// `ε/t` relative precision for the `1/t` power. We assemble `N = inner − I`
/// from `A^{t/2} − I` and `B^t − I` (each via `expm1`) and apply
/// `ν ↦ exp(log1p(ν)/t)` to `N`.
pub fn ltk_product<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    let two = T::lit(2.0);
    let ea = power_minus_identity(a, t / two);
    let eb = power_minus_identity(b, t);
    let (ab, ba) = (ea.matmul(&eb), eb.matmul(&ea));
    let first = &(&ea.scale(&two) + &eb) + &(&ab + &ba);
    let n = &first + &(&ea.matmul(&ea) + &ab.matmul(&ea));
    let eig = HermitianMatrix::from_symmetrized(&n).eig()?;
    let cut = T::tol(RANK_TOL) * (T::one() + eig.values.largest()).max(T::zero());
    Ok(eig.reconstruct(|nu| if T::one() + nu <= cut { T::zero() } else { (nu.ln_1p() / t).exp() }))
}

/// `A^p − I` with the support power (`−1` on the kernel).
fn power_minus_identity<T: Real>(a: &PsdMatrix<T>, p: T) -> ComplexMatrix<T> {
    let thr = a.kernel_threshold();
    a.eigen().reconstruct(|l| if l <= thr { -T::one() } else { (p * l.ln()).exp_m1() })
}

/// Error table of the Lie–Trotter–Kato product along a decreasing sequence.
pub fn lie_trotter_kato<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, ts: &[T]) -> Result<LtkReport<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if ts.is_empty() || ts.iter().any(|&t| !(t > T::zero())) || ts.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::InvalidParameter("t sequence must be positive and strictly decreasing".into()));
    }
    let target = ltk_target(a, b)?;
    let mut rows = Vec::with_capacity(ts.len());
    let mut last = target.clone();
    for &t in ts {
        last = ltk_product(a, b, t)?;
        rows.push(LtkRow {
            t: t.to_f64_lossy(),
            error: (&last - &target).frobenius_norm().to_f64_lossy(),
        });
    }
    let floor = 1e-12 * target.frobenius_norm().to_f64_lossy().max(1.0);
    let exact = rows.iter().all(|r| r.error <= floor);
    let decreasing = rows.windows(2).all(|p| p[1].error < p[0].error);
    Ok(LtkReport { target, limit_estimate: last, rows, decreasing, exact })
}
