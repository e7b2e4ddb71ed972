//! Araki log-majorization on random PSD pairs.

use logmaj::majorization::{araki_pair, check_weak_majorization, MajorizationTol};
use logmaj::random::{random_pd, random_psd_rank};
use logmaj::Psd;

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const CASES: usize = 1000;
const EXPONENTS: [f64; 3] = [0.25, 0.5, 0.75];

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let tol = MajorizationTol { margin: cfg.tol.margin, total: cfg.tol.total };
    run_cases("araki", cfg, CASES, |i, rng| {
        let m = cfg.dim(2, 6, i);
        let p = EXPONENTS[i % 3];
        // every fourth pair has a singular first factor
        let a: Psd = if i % 4 == 3 { random_psd_rank(m, m - 1, rng) } else { random_pd(m, rng).into_psd() };
        let b: Psd = random_pd(m, rng).into_psd();
        let cmp = araki_pair(&a, &b, p, tol)?;
        let weak = check_weak_majorization(cmp.lhs.as_slice(), cmp.rhs.as_slice(), cfg.tol.margin)?;

        let mut c = Checks::new();
        c.check("log-majorization", cmp.report.holds, cmp.report.worst_margin());
        c.check("weak-majorization", weak.holds, weak.worst_margin());
        c.note("m", m);
        c.note("p", p);
        c.note("rank_a", a.rank());
        c.note("worst_partial", r6(cmp.report.worst_margin()));
        c.note("det_gap", r6(cmp.report.final_equality_gap));
        Ok(c.finish())
    })
}
