//! Karcher mean: solver residual, two-point reduction, invariances, compound
//! compatibility, rescaled-mean log-majorizations and the Lie–Trotter limit.

use rand::Rng;

use logmaj::majorization::{compound_matrix, MajorizationTol};
use logmaj::means::{
    geometric_mean_two, karcher, karcher_mean, lie_trotter_scan, rescaled_mean_check, KarcherConfig, WeightVector,
};
use logmaj::random::{haar_unitary, log_uniform_pd, CaseRng};
use logmaj::{Matrix, Pd};

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const CASES: usize = 100;
pub const RESCALED_PAIRS: [(f64, f64); 3] = [(1.0, 0.5), (2.0, 1.0), (2.0, 0.25)];
pub const LIE_TROTTER_QS: [f64; 6] = [1.0, 0.5, 0.25, 0.1, 0.05, 0.01];

fn random_weights(n: usize, rng: &mut CaseRng) -> logmaj::Result<WeightVector<f64>> {
    WeightVector::normalized((0..n).map(|_| rng.random_range(0.2..1.0)).collect())
}

fn rel_dist(a: &Matrix, b: &Matrix) -> f64 {
    a.distance(b) / b.frobenius_norm().max(1.0)
}

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = &cfg.tol;
    let kc = KarcherConfig { tol: t.karcher_tol, ..KarcherConfig::default() };
    let mtol = MajorizationTol { margin: t.rescaled, total: t.rescaled };
    run_cases("karcher", cfg, CASES, |i, rng| {
        let m = cfg.dim(2, 4, i);
        let a: Vec<Pd> = (0..3).map(|_| log_uniform_pd(m, 1.0, rng)).collect();
        let w = random_weights(3, rng)?;
        let mut c = Checks::new();

        let sol = karcher_mean(&a, &w, &kc)?;
        let g = sol.mean.clone();
        c.small("residual", sol.residual, t.karcher_tol);

        let alpha: f64 = rng.random_range(0.1..0.9);
        let w2 = WeightVector::new(vec![1.0 - alpha, alpha])?;
        let two = karcher(&a[..2], &w2, &kc)?;
        let closed = geometric_mean_two(&a[0], &a[1], alpha)?;
        c.small("two-point", rel_dist(two.matrix(), closed.matrix()), t.two_point);

        let order = [2, 0, 1];
        let permuted: Vec<Pd> = order.iter().map(|&j| a[j].clone()).collect();
        let gp = karcher(&permuted, &w.permuted(&order), &kc)?;
        c.small("permutation", rel_dist(gp.matrix(), g.matrix()), t.invariance);

        let u: Matrix = haar_unitary(m, rng);
        let s = log_uniform_pd::<f64, _>(m, 0.5, rng);
        let mm = s.matrix().matmul(&u);
        let congr: Vec<Pd> = a.iter().map(|x| x.congruence(&mm)).collect::<logmaj::Result<_>>()?;
        let gc = karcher(&congr, &w, &kc)?;
        c.small("congruence", rel_dist(gc.matrix(), g.congruence(&mm)?.matrix()), t.invariance);

        let inv: Vec<Pd> = a.iter().map(Pd::inv).collect();
        let gi = karcher(&inv, &w, &kc)?;
        c.small("self-duality", rel_dist(gi.matrix(), g.inv().matrix()), t.invariance);

        let comp: Vec<Pd> = a.iter().map(|x| Pd::from_matrix(compound_matrix(x.matrix(), 2)?)).collect::<logmaj::Result<_>>()?;
        let gk = karcher(&comp, &w, &kc)?;
        let expected = compound_matrix(g.matrix(), 2)?;
        c.small("compound", rel_dist(gk.matrix(), &expected), t.compound);

        for (p, q) in RESCALED_PAIRS {
            let rep = rescaled_mean_check(&a, &w, p, q, &kc, mtol)?;
            c.check(format!("rescaled-monotone@{p},{q}"), rep.monotone.holds, rep.monotone.worst_margin());
            c.check(format!("rescaled-upper@{p}"), rep.upper.holds, rep.upper.worst_margin());
        }

        let scan = lie_trotter_scan(&a, &w, &LIE_TROTTER_QS, &kc)?;
        let decreasing = scan.windows(2).all(|p| p[1].distance < p[0].distance);
        let last = scan.last().map_or(f64::INFINITY, |p| p.distance);
        c.check("lie-trotter-decreasing", decreasing, 0.0);
        c.small("lie-trotter-limit", last, t.lie_trotter);

        c.note("m", m);
        c.note("iterations", sol.iterations);
        c.note("residual", r6(sol.residual));
        c.note("lie_trotter_last", r6(last));
        Ok(c.finish())
    })
}
