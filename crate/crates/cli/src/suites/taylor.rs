//! Taylor coefficients of `t ↦ G_ω(e^{tH_1}, …, e^{tH_n})`: recursion versus
//! closed forms, trace identities, the quartic defect, and the
//! finite-difference oracle.

use rand::Rng;

use logmaj::expansion::{closed_form_coefficients, finite_difference_taylor, taylor_coefficients, trace_identities};
use logmaj::means::{KarcherConfig, WeightVector};
use logmaj::random::{hermitian_in_range, CaseRng};
use logmaj::{Hermitian, Matrix};

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const CASES: usize = 100;
pub const ORDER: usize = 4;
/// Condition-(a) families (`Σ w_j H_j = cI`) every this many cases.
pub const CONDITION_A_EVERY: usize = 5;
pub const FD_EVERY: usize = 10;
pub const FD_STEP: f64 = 0.05;
pub const FD_ORDER: usize = 3;
/// Quartic trace defect in units of the commutator energy `Σ w_j ‖[H^{(1)}, H_j]‖_F²`.
pub const QUARTIC_FACTOR: f64 = -1.0 / 12.0;

/// Random family and weights; with `centred`, the last matrix is chosen so
/// that `Σ w_j H_j = cI` while the family stays non-commuting.
pub fn random_family(m: usize, n: usize, centred: bool, rng: &mut CaseRng) -> logmaj::Result<(Vec<Hermitian>, WeightVector<f64>)> {
    let w = WeightVector::normalized((0..n).map(|_| rng.random_range(0.2..1.0)).collect())?;
    let mut hs: Vec<Hermitian> = (0..n).map(|_| hermitian_in_range(m, -1.0, 1.0, rng)).collect();
    if centred {
        let c: f64 = rng.random_range(-0.5..0.5);
        let ws = w.as_slice();
        let rest = Hermitian::weighted_sum(ws[..n - 1].iter().copied().zip(hs[..n - 1].iter()), m);
        let target = Hermitian::identity(m).scale(c).sub(&rest);
        hs[n - 1] = target.scale(1.0 / ws[n - 1]);
    }
    Ok((hs, w))
}

fn rel_dist(a: &Matrix, b: &Matrix) -> f64 {
    a.distance(b) / b.frobenius_norm().max(1.0)
}

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = &cfg.tol;
    let kc = KarcherConfig { tol: t.karcher_tol, ..KarcherConfig::default() };
    run_cases("taylor", cfg, CASES, |i, rng| {
        let m = cfg.dim(2, 4, i);
        let n = 2 + i % 3;
        let centred = i % CONDITION_A_EVERY == CONDITION_A_EVERY - 1;
        let (hs, w) = random_family(m, n, centred, rng)?;
        let state = taylor_coefficients(&hs, &w, ORDER)?;
        let raw: Vec<Matrix> = hs.iter().map(|h| h.matrix().clone()).collect();
        let closed = closed_form_coefficients(&raw, w.as_slice())?;
        let mut c = Checks::new();

        let mut worst_closed: f64 = 0.0;
        for k in 1..=ORDER {
            worst_closed = worst_closed.max(rel_dist(&state.x[k], &closed.x[k - 1]));
            worst_closed = worst_closed.max(rel_dist(&state.y[k], &closed.y[k - 1]));
        }
        c.small("closed-forms", worst_closed, t.expansion);

        let ids = trace_identities(&hs, &w, &state);
        for k in 1..=3 {
            c.small(format!("trace-identity@{k}"), ids.defects[k - 1].abs(), t.defect);
        }
        let d4 = ids.defects[3];
        c.close("quartic-trace-form", d4, ids.quartic_trace_form, t.defect);
        c.close("quartic-commutator-form", d4, QUARTIC_FACTOR * ids.commutator_energy, t.defect);
        if centred {
            c.small("quartic-vanishes", d4.abs(), t.defect);
        }

        if i % FD_EVERY == 0 {
            let fd = finite_difference_taylor(&hs, &w, FD_ORDER, FD_STEP, &kc)?;
            for k in 1..=FD_ORDER {
                let err = fd.coeffs[k - 1].distance(&state.x[k]);
                let allowed = t.fd_floor.max(10.0 * fd.error_estimates[k - 1]);
                c.check(format!("finite-difference@{k}"), err <= allowed, allowed - err);
            }
            c.note("fd_error_estimates", fd.error_estimates.iter().map(|&x| r6(x)).collect::<Vec<_>>());
        }

        c.note("m", m);
        c.note("n", n);
        c.note("condition_a", centred);
        c.note("closed_form_error", r6(worst_closed));
        c.note("quartic_defect", r6(d4));
        c.note("commutator_energy", r6(ids.commutator_energy));
        Ok(c.finish())
    })
}
