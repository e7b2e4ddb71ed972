//! Weak and log-majorization verdicts, compound matrices, and the Araki-type
//! log-majorization checkers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{determinant, singular_values, ComplexMatrix, PsdMatrix, Spectrum, UnitarilyInvariantNorm, ZeroPower};
use crate::scalar::Real;
use crate::serde_ext;

/// Which order a [`MajorizationReport`] tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MajorizationKind {
    /// `a ≺_w b`: partial sums of `b` dominate.
    Weak,
    /// `a ≺_log b`: partial products dominate, total products equal.
    Log,
    /// `a ≺ b`: partial sums dominate, totals equal.
    Sum,
}

/// Tolerances for majorization verdicts: `margin` bounds how negative a
/// partial margin may be, `total` bounds the final equality gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorizationTol {
    pub margin: f64,
    pub total: f64,
}

impl MajorizationTol {
    pub fn uniform(tol: f64) -> Self {
        Self { margin: tol, total: tol }
    }
}

impl Default for MajorizationTol {
    fn default() -> Self {
        Self { margin: 1e-9, total: 1e-8 }
    }
}

/// Per-`k` margins (b-side minus a-side; logarithmic for [`MajorizationKind::Log`]).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub kind: MajorizationKind,
    #[serde(serialize_with = "serde_ext::extended_vec")]
    pub margins: Vec<f64>,
    #[serde(serialize_with = "serde_ext::extended")]
    pub final_equality_gap: f64,
    pub holds: bool,
    pub tol: f64,
    /// Tolerance on the final equality; only used by the log and sum kinds.
    pub final_tol: f64,
}

impl MajorizationReport {
    fn from_margins(kind: MajorizationKind, margins: Vec<f64>, tol: MajorizationTol) -> Self {
        let m = margins.len();
        let last = margins[m - 1];
        let holds = match kind {
            MajorizationKind::Weak => margins.iter().all(|&x| x >= -tol.margin),
            MajorizationKind::Log | MajorizationKind::Sum => {
                margins[..m - 1].iter().all(|&x| x >= -tol.margin) && last.abs() <= tol.total
            }
        };
        Self {
            kind,
            margins,
            final_equality_gap: last,
            holds,
            tol: tol.margin,
            final_tol: tol.total,
        }
    }

    /// Smallest slack: the least partial margin, and for equality kinds also
    /// `−|final gap|`. Negative values beyond the tolerance mean failure.
    pub fn worst_margin(&self) -> f64 {
        let m = self.margins.len();
        match self.kind {
            MajorizationKind::Weak => self.margins.iter().copied().fold(f64::INFINITY, f64::min),
            _ => self.margins[..m - 1]
                .iter()
                .copied()
                .fold(-self.final_equality_gap.abs(), f64::min),
        }
    }

    /// First index at which the verdict breaks, if any.
    pub fn first_failure(&self) -> Option<usize> {
        let m = self.margins.len();
        (0..m).find(|&k| {
            let x = self.margins[k];
            if k + 1 == m && self.kind != MajorizationKind::Weak {
                !(x.abs() <= self.final_tol)
            } else {
                !(x >= -self.tol)
            }
        })
    }
}

/// Sorted non-increasingly; same multiset.
pub fn decreasing_rearrangement<T: Real>(a: &[T]) -> Vec<T> {
    Spectrum::from_unsorted(a.to_vec()).into_vec()
}

fn check_lengths<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("majorization needs non-empty vectors".into()));
    }
    Ok(())
}

fn check_nonnegative<T: Real>(v: &[T]) -> Result<()> {
    match v.iter().find(|&&x| !(x >= T::zero()) || !x.is_finite()) {
        Some(x) => Err(Error::InvalidParameter(format!(
            "log-majorization needs finite non-negative entries, got {x}"
        ))),
        None => Ok(()),
    }
}

/// `a ≺_log b` with a single tolerance for partial margins and the determinant.
pub fn check_log_majorization<T: Real>(a: &[T], b: &[T], tol: f64) -> Result<MajorizationReport> {
    check_log_majorization_with(a, b, MajorizationTol::uniform(tol))
}

/// `a ≺_log b`. Zero entries are compared by count before taking logs: a
/// prefix whose `b`-product vanishes while the `a`-product does not has margin
/// `−∞`, the reverse `+∞`, and two vanishing prefixes have margin `0`.
pub fn check_log_majorization_with<T: Real>(a: &[T], b: &[T], tol: MajorizationTol) -> Result<MajorizationReport> {
    check_lengths(a, b)?;
    check_nonnegative(a)?;
    check_nonnegative(b)?;
    let a = decreasing_rearrangement(a);
    let b = decreasing_rearrangement(b);
    let (mut la, mut lb) = (0.0f64, 0.0f64);
    let (mut za, mut zb) = (0usize, 0usize);
    let mut margins = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(&b) {
        let (x, y) = (x.to_f64_lossy(), y.to_f64_lossy());
        if x > 0.0 {
            la += x.ln();
        } else {
            za += 1;
        }
        if y > 0.0 {
            lb += y.ln();
        } else {
            zb += 1;
        }
        margins.push(match (za > 0, zb > 0) {
            (false, false) => lb - la,
            (true, true) => 0.0,
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
        });
    }
    Ok(MajorizationReport::from_margins(MajorizationKind::Log, margins, tol))
}

fn additive_margins<T: Real>(a: &[T], b: &[T]) -> Vec<f64> {
    let a = decreasing_rearrangement(a);
    let b = decreasing_rearrangement(b);
    let mut acc = 0.0;
    a.iter()
        .zip(&b)
        .map(|(x, y)| {
            acc += y.to_f64_lossy() - x.to_f64_lossy();
            acc
        })
        .collect()
}

/// `a ≺_w b`.
pub fn check_weak_majorization<T: Real>(a: &[T], b: &[T], tol: f64) -> Result<MajorizationReport> {
    check_lengths(a, b)?;
    Ok(MajorizationReport::from_margins(
        MajorizationKind::Weak,
        additive_margins(a, b),
        MajorizationTol::uniform(tol),
    ))
}

/// `a ≺ b`: weak majorization plus equal totals.
pub fn check_majorization<T: Real>(a: &[T], b: &[T], tol: MajorizationTol) -> Result<MajorizationReport> {
    check_lengths(a, b)?;
    Ok(MajorizationReport::from_margins(MajorizationKind::Sum, additive_margins(a, b), tol))
}

/// Increasing `k`-subsets of `0..m` in lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `k`-th compound `A^{∧k}`: the matrix of `k×k` minors, rows and columns
/// indexed by [`k_subsets`] in lexicographic order.
pub fn compound_matrix<T: Real>(a: &ComplexMatrix<T>, k: usize) -> Result<ComplexMatrix<T>> {
    let m = a.dim();
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!("compound order {k} outside 1..={m}")));
    }
    let sets = k_subsets(m, k);
    let mut out = ComplexMatrix::zeros(sets.len());
    for (i, rows) in sets.iter().enumerate() {
        for (j, cols) in sets.iter().enumerate() {
            out[(i, j)] = determinant(&a.submatrix(rows, cols));
        }
    }
    Ok(out)
}

/// Both sides of a log-majorization between spectra, with the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralComparison<T: Real> {
    pub lhs: Spectrum<T>,
    pub rhs: Spectrum<T>,
    pub report: MajorizationReport,
}

fn compare<T: Real>(lhs: Spectrum<T>, rhs: Spectrum<T>, tol: MajorizationTol) -> Result<SpectralComparison<T>> {
    let report = check_log_majorization_with(lhs.as_slice(), rhs.as_slice(), tol)?;
    Ok(SpectralComparison { lhs, rhs, report })
}

fn same_dim<T: Real>(mats: &[&PsdMatrix<T>]) -> Result<usize> {
    let m = mats[0].dim();
    for x in &mats[1..] {
        if x.dim() != m {
            return Err(Error::DimensionMismatch(m, x.dim()));
        }
    }
    Ok(m)
}

/// Zeroes values at or below `RANK_TOL·max(x_1, scale)`. The scale is the
/// size the product would have without cancellation, so a product that is
/// zero up to roundoff is recognized even when all its entries are tiny.
fn snap_to_scale<T: Real>(s: Spectrum<T>, scale: T) -> Spectrum<T> {
    let thr = T::tol(crate::linalg::RANK_TOL) * s.largest().max(scale);
    s.map(|x| if x <= thr { T::zero() } else { x })
}

fn top<T: Real>(a: &PsdMatrix<T>) -> T {
    a.spectrum().largest()
}

/// `λ(A^{1/2} B A^{1/2})`, kernel-snapped against `λ_1(A)λ_1(B)`.
pub fn sandwich_spectrum<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>) -> Result<Spectrum<T>> {
    let h = a.sqrt();
    let l = PsdMatrix::from_product(&h.matrix().congruence(b.matrix()))?.spectrum();
    Ok(snap_to_scale(l, top(a) * top(b)))
}

/// `λ(A^{p/2}B^pA^{p/2}) ≺_log λ((A^{1/2}BA^{1/2})^p)` for `0 < p ≤ 1`.
pub fn araki_pair<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, p: T, tol: MajorizationTol) -> Result<SpectralComparison<T>> {
    same_dim(&[a, b])?;
    if !(p > T::zero() && p <= T::one()) {
        return Err(Error::InvalidParameter(format!("Araki exponent must lie in (0, 1], got {p}")));
    }
    let ap = a.pow(p / T::lit(2.0));
    let bp = b.pow(p);
    let lhs = PsdMatrix::from_product(&ap.matrix().congruence(bp.matrix()))?.spectrum();
    let lhs = snap_to_scale(lhs, top(&ap) * top(&ap) * top(&bp));
    let rhs = sandwich_spectrum(a, b)?.map(|l| if l > T::zero() { l.powf(p) } else { T::zero() });
    compare(lhs, rhs, tol)
}

/// Relative commutation tolerance for the extended Araki hypothesis.
pub const COMMUTE_TOL: f64 = 1e-10;

fn require_commuting<T: Real>(x: &PsdMatrix<T>, y: &PsdMatrix<T>, what: &'static str) -> Result<()> {
    let norm = x.matrix().commutator(y.matrix()).frobenius_norm();
    let allowed = T::tol(COMMUTE_TOL) * (T::one() + x.matrix().frobenius_norm() * y.matrix().frobenius_norm());
    if norm > allowed {
        return Err(Error::CommutationViolated {
            what,
            norm: norm.to_f64_lossy(),
            allowed: allowed.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `X^θ Y^{1−θ}` for commuting PSD `X, Y`, with the given zeroth-power convention.
pub fn commuting_interpolant<T: Real>(x: &PsdMatrix<T>, y: &PsdMatrix<T>, theta: T, conv: ZeroPower) -> Result<PsdMatrix<T>> {
    let xp = x.pow_with(theta, conv);
    let yp = y.pow_with(T::one() - theta, conv);
    let prod = PsdMatrix::from_product(&xp.matrix().matmul(yp.matrix()))?;
    // disjoint supports leave roundoff, not zeros, in the product
    let e = prod.eigen();
    let thr = T::tol(crate::linalg::RANK_TOL) * e.values.largest().max(top(&xp) * top(&yp));
    let values = e.values.as_slice().iter().map(|&l| if l <= thr { T::zero() } else { l }).collect();
    Ok(PsdMatrix::from_eigen_parts(values, e.vectors.clone()))
}

/// Inputs of the extended Araki inequality: commuting pairs `(A1, A2)` and `(B1, B2)`.
#[derive(Clone, Copy, Debug)]
pub struct CommutingQuad<'a, T> {
    pub a1: &'a PsdMatrix<T>,
    pub a2: &'a PsdMatrix<T>,
    pub b1: &'a PsdMatrix<T>,
    pub b2: &'a PsdMatrix<T>,
}

impl<'a, T: Real> CommutingQuad<'a, T> {
    pub fn new(a1: &'a PsdMatrix<T>, a2: &'a PsdMatrix<T>, b1: &'a PsdMatrix<T>, b2: &'a PsdMatrix<T>) -> Result<Self> {
        same_dim(&[a1, a2, b1, b2])?;
        require_commuting(a1, a2, "A1 and A2")?;
        require_commuting(b1, b2, "B1 and B2")?;
        Ok(Self { a1, a2, b1, b2 })
    }

    fn interpolants(&self, theta: T, conv: ZeroPower) -> Result<(PsdMatrix<T>, PsdMatrix<T>)> {
        if !(theta >= T::zero() && theta <= T::one()) {
            return Err(Error::InvalidParameter(format!("θ must lie in [0, 1], got {theta}")));
        }
        Ok((
            commuting_interpolant(self.a1, self.a2, theta, conv)?,
            commuting_interpolant(self.b1, self.b2, theta, conv)?,
        ))
    }

    /// `λ((A1^θA2^{1−θ})^{1/2}(B1^θB2^{1−θ})(A1^θA2^{1−θ})^{1/2}) ≺_log λ^θ(A1^{1/2}B1A1^{1/2})·λ^{1−θ}(A2^{1/2}B2A2^{1/2})`.
    pub fn eigenvalue_form(&self, theta: T, conv: ZeroPower, tol: MajorizationTol) -> Result<SpectralComparison<T>> {
        let (ta, tb) = self.interpolants(theta, conv)?;
        let lhs = sandwich_spectrum(&ta, &tb)?;
        let l1 = sandwich_spectrum(self.a1, self.b1)?;
        let l2 = sandwich_spectrum(self.a2, self.b2)?;
        let rhs = interpolate_spectra(&l1, &l2, theta, conv);
        compare(lhs, rhs, tol)
    }

    /// `s((A1^θA2^{1−θ})(B1^θB2^{1−θ})) ≺_log s^θ(A1B1)·s^{1−θ}(A2B2)`.
    pub fn singular_value_form(&self, theta: T, conv: ZeroPower, tol: MajorizationTol) -> Result<SpectralComparison<T>> {
        let (lhs, s1, s2) = self.product_singular_values(theta, conv)?;
        let rhs = interpolate_spectra(&s1, &s2, theta, conv);
        compare(lhs, rhs, tol)
    }

    /// Kernel-snapped `s(T_A T_B)`, `s(A1B1)`, `s(A2B2)`.
    fn product_singular_values(&self, theta: T, conv: ZeroPower) -> Result<(Spectrum<T>, Spectrum<T>, Spectrum<T>)> {
        let (ta, tb) = self.interpolants(theta, conv)?;
        Ok((
            snap(singular_values(&ta.matrix().matmul(tb.matrix()))?, top(&ta) * top(&tb)),
            snap(singular_values(&self.a1.matrix().matmul(self.b1.matrix()))?, top(self.a1) * top(self.b1)),
            snap(singular_values(&self.a2.matrix().matmul(self.b2.matrix()))?, top(self.a2) * top(self.b2)),
        ))
    }

    /// `‖|(A1^θA2^{1−θ})(B1^θB2^{1−θ})|^r‖ ≤ ‖|A1B1|^r‖^θ ‖|A2B2|^r‖^{1−θ}`.
    pub fn norm_form(&self, theta: T, r: T, norm: UnitarilyInvariantNorm, conv: ZeroPower, tol: f64) -> Result<NormComparison> {
        if !(r > T::zero()) {
            return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
        }
        let norm = norm.validate()?;
        // snapped singular values: for r < 1 roundoff-sized ones would count
        let (s, s1, s2) = self.product_singular_values(theta, conv)?;
        let of = |s: &Spectrum<T>| norm.of_singular_values(&s.map(|v| if v > T::zero() { v.powf(r) } else { T::zero() }).into_vec());
        let (lhs, n1, n2) = (of(&s), of(&s1), of(&s2));
        let rhs = real_pow(n1, theta) * real_pow(n2, T::one() - theta);
        Ok(NormComparison::new(lhs.to_f64_lossy(), rhs.to_f64_lossy(), tol))
    }
}

/// `x^e` for norms, with `x^0 = 1` (a number raised to the zeroth power).
fn real_pow<T: Real>(x: T, e: T) -> T {
    if e == T::zero() {
        T::one()
    } else if x <= T::zero() {
        T::zero()
    } else {
        x.powf(e)
    }
}

/// Singular values of a product `XY` set to zero where
/// `s_i² ≤ RANK_TOL·max(s_1, scale)²`, i.e. on the numerical kernel of the
/// Gram matrix they are computed from; `scale = ‖X‖‖Y‖`.
fn snap<T: Real>(s: Spectrum<T>, scale: T) -> Spectrum<T> {
    let thr = T::tol(crate::linalg::RANK_TOL.sqrt()) * s.largest().max(scale);
    s.map(|x| if x <= thr { T::zero() } else { x })
}

/// `(x_i^θ y_i^{1−θ})_i` entrywise on decreasingly sorted inputs.
pub fn interpolate_spectra<T: Real>(x: &Spectrum<T>, y: &Spectrum<T>, theta: T, conv: ZeroPower) -> Spectrum<T> {
    Spectrum::from_unsorted(
        x.as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(&a, &b)| conv.scalar_pow(a, theta) * conv.scalar_pow(b, T::one() - theta))
            .collect(),
    )
}

/// Scalar inequality `lhs ≤ rhs` with tolerance `tol·max(1, rhs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormComparison {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `(rhs − lhs) / max(1, rhs)`.
    pub relative_margin: f64,
}

impl NormComparison {
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let relative_margin = (rhs - lhs) / rhs.abs().max(1.0);
        Self { lhs, rhs, holds: relative_margin >= -tol, relative_margin }
    }
}

/// Convenience wrapper over [`CommutingQuad::eigenvalue_form`].
#[allow(clippy::too_many_arguments)]
pub fn extended_araki<T: Real>(
    a1: &PsdMatrix<T>,
    a2: &PsdMatrix<T>,
    b1: &PsdMatrix<T>,
    b2: &PsdMatrix<T>,
    theta: T,
    conv: ZeroPower,
    tol: MajorizationTol,
) -> Result<SpectralComparison<T>> {
    CommutingQuad::new(a1, a2, b1, b2)?.eigenvalue_form(theta, conv, tol)
}

/// Convenience wrapper over [`CommutingQuad::norm_form`].
#[allow(clippy::too_many_arguments)]
pub fn corollary_norm_check<T: Real>(
    a1: &PsdMatrix<T>,
    a2: &PsdMatrix<T>,
    b1: &PsdMatrix<T>,
    b2: &PsdMatrix<T>,
    theta: T,
    r: T,
    norm: UnitarilyInvariantNorm,
    conv: ZeroPower,
    tol: f64,
) -> Result<NormComparison> {
    CommutingQuad::new(a1, a2, b1, b2)?.norm_form(theta, r, norm, conv, tol)
}

/// Result of [`araki_equality_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EqualityProbe {
    /// `‖(A^{q/2}B^qA^{q/2})^{1/q}‖ − ‖(A^{p/2}B^pA^{p/2})^{1/p}‖`.
    pub gap: f64,
    /// `‖AB − BA‖_F`.
    pub commutator_norm: f64,
}

/// `‖(A^{p/2}B^pA^{p/2})^{1/p}‖`.
pub fn araki_norm<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, p: T, norm: UnitarilyInvariantNorm) -> Result<T> {
    let ap = a.pow(p / T::lit(2.0));
    let l = PsdMatrix::from_product(&ap.matrix().congruence(b.pow(p).matrix()))?.spectrum();
    let inv = T::one() / p;
    let s: Vec<T> = l.as_slice().iter().map(|&x| if x > T::zero() { x.powf(inv) } else { T::zero() }).collect();
    Ok(norm.of_singular_values(&s))
}

/// Monotonicity gap of `p ↦ ‖(A^{p/2}B^pA^{p/2})^{1/p}‖` between `p < q`,
/// reported with the commutator norm it should correlate with.
pub fn araki_equality_probe<T: Real>(
    a: &PsdMatrix<T>,
    b: &PsdMatrix<T>,
    p: T,
    q: T,
    norm: UnitarilyInvariantNorm,
) -> Result<EqualityProbe> {
    same_dim(&[a, b])?;
    if !(p > T::zero() && p < q) {
        return Err(Error::InvalidParameter(format!("need 0 < p < q, got p = {p}, q = {q}")));
    }
    let norm = norm.validate()?;
    if !norm.is_strictly_increasing() {
        return Err(Error::InvalidParameter(format!("{norm:?} is not strictly increasing")));
    }
    let gap = araki_norm(a, b, q, norm)? - araki_norm(a, b, p, norm)?;
    Ok(EqualityProbe {
        gap: gap.to_f64_lossy(),
        commutator_norm: a.matrix().commutator(b.matrix()).frobenius_norm().to_f64_lossy(),
    })
}
