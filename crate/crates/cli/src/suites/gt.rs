//! Multivariate Golden–Thompson: the trace bound on random triples, its
//! log-majorization form, the block-diagonal equality triple, and the
//! three-matrix integral form.

use std::f64::consts::E;

use logmaj::golden_thompson::{
    equality_triple, equality_triple_inputs, gt_check, gt_log_majorization, lieb_check, trace_of_exp_product,
};
use logmaj::majorization::MajorizationTol;
use logmaj::quadrature::{build_quadrature, build_quadrature_with, BetaQuadrature, DEFAULT_ORDER, DEFAULT_PANEL_WIDTH};
use logmaj::random::{haar_unitary, hermitian_in_range, with_spectrum, CaseRng};
use logmaj::{Hermitian, Matrix};
use rand::Rng;

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::{CaseOutcome, CaseRecord};

pub const RANDOM_CASES: usize = 200;
/// Tail mass of the quadrature used on the equality triple.
pub const TRIPLE_EPS: f64 = 1e-8;
pub const TRIPLE_POWERS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
/// Relative equality required on the triple.
pub const TRIPLE_GAP_TOL: f64 = 1e-6;
const FIXED: usize = TRIPLE_POWERS.len() + 3;
/// Every this many random triples also get the log-majorization check.
const LOG_MAJ_EVERY: usize = 5;
const LOG_MAJ_THETA: f64 = 0.5;

/// `Tr e^{rK} + Tr e^{rH}` for the regression inputs.
pub fn triple_closed_form(r: f64) -> f64 {
    (E.powf(r) + E.powf(-r)) + (E.powf(r) + 1.0)
}

struct Quadratures {
    triple: BetaQuadrature,
    random: BetaQuadrature,
    fine: BetaQuadrature,
    precise: BetaQuadrature,
    half: BetaQuadrature,
}

fn random_triple(m: usize, rng: &mut CaseRng) -> Vec<Hermitian> {
    (0..3).map(|_| hermitian_in_range(m, -1.0, 1.0, rng)).collect()
}

fn triple_case(r: f64, q: &Quadratures, cfg: &RunConfig) -> logmaj::Result<CaseOutcome> {
    let (h, k) = equality_triple_inputs::<f64>();
    let (hs, comm) = equality_triple(&h, &k)?;
    let rep = gt_check(&hs, r, &q.triple, cfg.tol.gt_gap)?;
    let closed = triple_closed_form(r);
    let mut c = Checks::new();
    let rel_gap = rep.gap.abs() / rep.lhs;
    c.small("equality", rel_gap, TRIPLE_GAP_TOL);
    c.close("lhs-closed-form", rep.lhs, closed, cfg.tol.reduction);
    c.check("no-commutation", comm.all_nonzero, comm.min_norm);
    if r == 1.0 {
        let product = trace_of_exp_product(&hs)?;
        c.close("product-closed-form", product, closed, cfg.tol.reduction);
    }
    c.note("r", r);
    c.note("lhs", rep.lhs);
    c.note("rhs", rep.rhs);
    c.note("relative_gap", r6(rel_gap));
    c.note("min_commutator", r6(comm.min_norm));
    Ok(c.finish())
}

fn quadrature_case(q: &Quadratures, cfg: &RunConfig, rng: &mut CaseRng) -> logmaj::Result<CaseOutcome> {
    let mut c = Checks::new();
    for quad in [&q.triple, &q.random] {
        let mass = quad.mass();
        let slack = 2.0 * quad.eps - (mass - 1.0).abs();
        c.check(format!("mass@eps={}", quad.eps), slack >= 0.0, slack);
    }
    // doubling the panel order leaves the bound unchanged
    let hs = random_triple(3, rng);
    let coarse = gt_check(&hs, 2.0, &q.random, cfg.tol.gt_gap)?;
    let fine = gt_check(&hs, 2.0, &q.fine, cfg.tol.gt_gap)?;
    c.close("order-doubling", fine.rhs, coarse.rhs, 1e-10);
    c.note("mass", q.triple.mass());
    c.note("nodes", q.random.len());
    Ok(c.finish())
}

fn lieb_case(q: &Quadratures, cfg: &RunConfig, rng: &mut CaseRng) -> logmaj::Result<CaseOutcome> {
    let hs = random_triple(3, rng);
    let doubled: Vec<Hermitian> = hs.iter().map(|h| h.scale(2.0)).collect();
    let gt = gt_check(&hs, 2.0, &q.random, cfg.tol.gt_gap)?;
    let lieb = lieb_check(&doubled[0], &doubled[1], &doubled[2], &q.random, cfg.tol.gt_gap)?;
    let mut c = Checks::new();
    c.close("lieb-rhs", lieb.rhs, gt.rhs, cfg.tol.defect);
    c.close("lieb-lhs", lieb.lhs, gt.lhs, cfg.tol.defect);
    c.check("lieb-bound", lieb.holds, lieb.gap / lieb.lhs.max(1.0));
    c.note("rhs", gt.rhs);
    Ok(c.finish())
}

fn commuting_case(q: &Quadratures, cfg: &RunConfig, rng: &mut CaseRng) -> logmaj::Result<CaseOutcome> {
    let m = 3;
    let u: Matrix = haar_unitary(m, rng);
    let hs: Vec<Hermitian> = (0..3)
        .map(|_| {
            let d: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
            Hermitian::from_symmetrized(&with_spectrum(&u, &d))
        })
        .collect();
    let mut c = Checks::new();
    for r in [1.0, 2.0] {
        let rep = gt_check(&hs, r, &q.precise, cfg.tol.gt_gap)?;
        c.small(format!("commuting-equality@r={r}"), rep.gap.abs() / rep.lhs.max(1.0), 1e-9);
    }
    let lm = gt_log_majorization(&hs, LOG_MAJ_THETA, 1.0, Some(&q.half), MajorizationTol::uniform(1e-9))?;
    c.small("commuting-log-equality", lm.margins.iter().fold(0.0f64, |a, x| a.max(x.abs())), 1e-9);
    Ok(c.finish())
}

fn random_case(i: usize, q: &Quadratures, cfg: &RunConfig, rng: &mut CaseRng) -> logmaj::Result<CaseOutcome> {
    let m = cfg.dim(2, 4, i);
    let hs = random_triple(m, rng);
    let r = if i % 2 == 0 { 1.0 } else { 2.0 };
    let rep = gt_check(&hs, r, &q.random, cfg.tol.gt_gap)?;
    let mut c = Checks::new();
    c.check("trace-bound", rep.holds, rep.gap / rep.lhs.max(1.0));
    if i % LOG_MAJ_EVERY == 0 {
        let floor = 10.0 * cfg.tol.quad_eps;
        let tol = MajorizationTol { margin: cfg.tol.margin.max(floor), total: cfg.tol.total.max(floor) };
        let lm = gt_log_majorization(&hs, LOG_MAJ_THETA, r, Some(&q.half), tol)?;
        c.check("log-majorization@0.5", lm.holds, lm.worst_margin());
        let point = gt_log_majorization(&hs, 1.0, r, None, tol)?;
        c.check("log-majorization@1", point.holds, point.worst_margin());
    }
    c.note("m", m);
    c.note("r", r);
    c.note("lhs", r6(rep.lhs));
    c.note("gap", r6(rep.gap));
    Ok(c.finish())
}

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let eps = cfg.tol.quad_eps;
    let q = match (|| -> logmaj::Result<Quadratures> {
        Ok(Quadratures {
            triple: build_quadrature(0.0, TRIPLE_EPS)?,
            random: build_quadrature(0.0, eps)?,
            fine: build_quadrature_with(0.0, eps, 2 * DEFAULT_ORDER, DEFAULT_PANEL_WIDTH)?,
            precise: build_quadrature(0.0, eps.min(1e-12))?,
            half: build_quadrature(LOG_MAJ_THETA, eps)?,
        })
    })() {
        Ok(q) => q,
        Err(e) => {
            return vec![CaseRecord {
                suite: "gt",
                case: 0,
                ok: false,
                margin: f64::NAN,
                detail: serde_json::Value::Null,
                error: Some(e.to_string()),
            }]
        }
    };
    run_cases("gt", cfg, FIXED + RANDOM_CASES, |i, rng| match i {
        _ if i < TRIPLE_POWERS.len() => triple_case(TRIPLE_POWERS[i], &q, cfg),
        4 => quadrature_case(&q, cfg, rng),
        5 => lieb_case(&q, cfg, rng),
        6 => commuting_case(&q, cfg, rng),
        _ => random_case(i - FIXED, &q, cfg, rng),
    })
}
