//! Lie–Trotter–Kato limit for singular PSD pairs.

use logmaj::expansion::{default_ltk_sequence, lie_trotter_kato};
use logmaj::random::{commuting_family, random_psd_rank};
use logmaj::Psd;

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const RANDOM_CASES: usize = 50;
pub const COMMUTING_CASES: usize = 10;

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let ts = default_ltk_sequence();
    run_cases("ltk", cfg, RANDOM_CASES + COMMUTING_CASES, |i, rng| {
        let m = cfg.dim(3, 5, i);
        let commuting = i >= RANDOM_CASES;
        let (a, b): (Psd, Psd) = if commuting {
            // shared eigenbasis with kernels: the product is exact for every t
            let mut f = commuting_family::<f64, _>(m, 2, 1.0, 0.3, rng);
            let b = f.pop().expect("two matrices");
            (f.pop().expect("two matrices"), b)
        } else {
            // ranks m−1 and m−1 (or m): the supports meet in a non-zero subspace
            let rb = if i % 2 == 0 { m } else { m - 1 };
            (random_psd_rank(m, m - 1, rng), random_psd_rank(m, rb, rng))
        };
        let rep = lie_trotter_kato(&a, &b, &ts)?;
        let mut c = Checks::new();
        let errors: Vec<f64> = rep.rows.iter().map(|r| r.error).collect();
        let worst = errors.iter().copied().fold(0.0, f64::max);
        if commuting {
            let scale = rep.target.frobenius_norm().max(1.0);
            c.small("exact", worst / scale, cfg.tol.ltk_exact);
        } else {
            let slack = errors.windows(2).map(|p| p[0] - p[1]).fold(f64::INFINITY, f64::min);
            c.check("decreasing", rep.decreasing, slack);
        }
        c.note("m", m);
        c.note("commuting", commuting);
        c.note("ranks", [a.rank(), b.rank()]);
        c.note("errors", errors.iter().map(|&x| r6(x)).collect::<Vec<_>>());
        Ok(c.finish())
    })
}
