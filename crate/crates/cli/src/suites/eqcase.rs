//! Equality conditions for the rescaled Karcher mean on commuting,
//! condition-(a)-only and generic families.

use logmaj::expansion::{equality_case_check, EqualityCaseConfig};
use logmaj::linalg::UnitarilyInvariantNorm;
use logmaj::means::{KarcherConfig, WeightVector};
use logmaj::random::{commuting_family, hermitian_in_range, log_uniform_pd, CaseRng};
use logmaj::{Hermitian, Pd};

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const COMMUTING: usize = 50;
pub const CONDITION_A_ONLY: usize = 20;
pub const GENERIC: usize = 50;
const FAMILY_SIZE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Commuting,
    ConditionAOnly,
    Generic,
}

pub fn family_of(i: usize) -> Family {
    if i < COMMUTING {
        Family::Commuting
    } else if i < COMMUTING + CONDITION_A_ONLY {
        Family::ConditionAOnly
    } else {
        Family::Generic
    }
}

/// `e^{H_j}` with `(1/n)Σ H_j = cI`; the matrices themselves do not commute.
fn condition_a_family(m: usize, rng: &mut CaseRng) -> logmaj::Result<Vec<Pd>> {
    let n = FAMILY_SIZE;
    let mut hs: Vec<Hermitian> = (0..n - 1).map(|_| hermitian_in_range(m, -0.8, 0.8, rng)).collect();
    let sum = hs.iter().fold(Hermitian::zeros(m), |acc, h| acc.add(h));
    hs.push(Hermitian::identity(m).scale(0.3 * n as f64).sub(&sum));
    hs.iter().map(|h| h.exp()).collect()
}

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = &cfg.tol;
    let ec = EqualityCaseConfig {
        eq_tol: t.eq_tol,
        karcher: KarcherConfig { tol: t.karcher_tol, ..KarcherConfig::default() },
        ..EqualityCaseConfig::default()
    };
    let w = WeightVector::uniform(FAMILY_SIZE);
    run_cases("eqcase", cfg, COMMUTING + CONDITION_A_ONLY + GENERIC, |i, rng| {
        let m = cfg.dim(2, 4, i);
        let family = family_of(i);
        let (norm_name, norm) = if i % 2 == 0 {
            ("frobenius", UnitarilyInvariantNorm::FROBENIUS)
        } else {
            ("trace", UnitarilyInvariantNorm::TRACE)
        };
        let a: Vec<Pd> = match family {
            Family::Commuting => commuting_family::<f64, _>(m, FAMILY_SIZE, 1.0, 0.0, rng)
                .into_iter()
                .map(Pd::new)
                .collect::<logmaj::Result<_>>()?,
            Family::ConditionAOnly => condition_a_family(m, rng)?,
            Family::Generic => (0..FAMILY_SIZE).map(|_| log_uniform_pd(m, 1.0, rng)).collect(),
        };
        let rep = equality_case_check(&a, &w, norm, &ec)?;
        let expect = family != Family::Generic;
        let mut c = Checks::new();
        c.check("consistent", rep.consistent, 0.0);
        for (name, v) in [("a", rep.a), ("b", rep.b), ("c", rep.c), ("d", rep.d)] {
            let slack = if expect { v.threshold - v.value } else { v.value - v.threshold };
            c.check(format!("condition-{name}"), v.holds == expect, slack);
        }
        c.check("probe-monotone", !rep.e.non_decrease, -rep.e.max_rise);
        if expect {
            c.check("probe-flat", rep.e.flat, -rep.e.max_drop);
        } else {
            c.check("probe-strict-decrease", rep.e.max_drop > t.probe_margin, rep.e.max_drop - t.probe_margin);
        }
        c.note("family", family);
        c.note("m", m);
        c.note("norm", norm_name);
        c.note("verdicts", [rep.a.holds, rep.b.holds, rep.c.holds, rep.d.holds]);
        c.note("values", [r6(rep.a.value), r6(rep.b.value), r6(rep.c.value), r6(rep.d.value)]);
        c.note("max_drop", r6(rep.e.max_drop));
        Ok(c.finish())
    })
}
