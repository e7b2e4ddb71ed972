//! Extended Araki inequalities on commuting families, and their reductions
//! to the two-matrix case.

use logmaj::linalg::{UnitarilyInvariantNorm, ZeroPower};
use logmaj::majorization::{araki_pair, extended_araki, CommutingQuad, MajorizationTol, SpectralComparison};
use logmaj::random::commuting_family;
use logmaj::Psd;

use super::{run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const CASES: usize = 500;
pub const THETAS: [f64; 4] = [0.0, 0.3, 0.7, 1.0];
const CONVENTIONS: [ZeroPower; 2] = [ZeroPower::Identity, ZeroPower::Support];
const NORMS: [(&str, UnitarilyInvariantNorm); 4] = [
    ("trace", UnitarilyInvariantNorm::TRACE),
    ("frobenius", UnitarilyInvariantNorm::FROBENIUS),
    ("operator", UnitarilyInvariantNorm::Operator),
    ("kyfan2", UnitarilyInvariantNorm::KyFan(2)),
];
const POWERS: [f64; 3] = [0.5, 1.0, 2.0];

fn conv_name(c: ZeroPower) -> &'static str {
    match c {
        ZeroPower::Identity => "identity",
        ZeroPower::Support => "support",
    }
}

/// Largest entrywise difference of two spectral comparisons, relative to the entry size.
fn spectral_distance(x: &SpectralComparison<f64>, y: &SpectralComparison<f64>) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).abs() / v.abs().max(1.0)).fold(0.0, f64::max);
    d(x.lhs.as_slice(), y.lhs.as_slice()).max(d(x.rhs.as_slice(), y.rhs.as_slice()))
}

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let tol = MajorizationTol { margin: cfg.tol.margin, total: cfg.tol.total };
    run_cases("extended", cfg, CASES, |i, rng| {
        let m = cfg.dim(2, 6, i);
        let zero_prob = if i % 2 == 1 { 0.25 } else { 0.0 };
        let a = commuting_family::<f64, _>(m, 2, 1.0, zero_prob, rng);
        let b = commuting_family::<f64, _>(m, 2, 1.0, zero_prob, rng);
        let quad = CommutingQuad::new(&a[0], &a[1], &b[0], &b[1])?;

        let mut c = Checks::new();
        for &conv in &CONVENTIONS {
            for &theta in &THETAS {
                let tag = format!("{}@{theta}", conv_name(conv));
                let ev = quad.eigenvalue_form(theta, conv, tol)?;
                c.check(format!("eigenvalue/{tag}"), ev.report.holds, ev.report.worst_margin());
                let sv = quad.singular_value_form(theta, conv, tol)?;
                c.check(format!("singular/{tag}"), sv.report.holds, sv.report.worst_margin());
                for (name, norm) in NORMS {
                    for r in POWERS {
                        let n = quad.norm_form(theta, r, norm, conv, cfg.tol.margin)?;
                        c.check(format!("{name}^{r}/{tag}"), n.holds, n.relative_margin);
                    }
                }
            }
        }

        // With the identity convention, trivial first or second factors
        // collapse the inequality to the two-matrix one.
        let id = Psd::identity(m);
        let mut worst_reduction: f64 = 0.0;
        for &theta in &THETAS {
            if theta < 1.0 {
                let ext = extended_araki(&id, &a[1], &id, &b[1], theta, ZeroPower::Identity, tol)?;
                let two = araki_pair(&a[1], &b[1], 1.0 - theta, tol)?;
                worst_reduction = worst_reduction.max(spectral_distance(&ext, &two));
            }
            if theta > 0.0 {
                let ext = extended_araki(&a[0], &id, &b[0], &id, theta, ZeroPower::Identity, tol)?;
                let two = araki_pair(&a[0], &b[0], theta, tol)?;
                worst_reduction = worst_reduction.max(spectral_distance(&ext, &two));
            }
        }
        c.small("reduction", worst_reduction, cfg.tol.reduction);
        c.note("m", m);
        c.note("zero_prob", zero_prob);
        c.note("reduction_error", super::r6(worst_reduction));
        Ok(c.finish())
    })
}
