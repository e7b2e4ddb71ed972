//! α-z-Rényi divergences: α- and z-monotonicity, log-convexity of `Q`, the
//! commuting-case oracle and scans along lines `z = κα + z0`.

use rand::Rng;

use logmaj::divergence::{
    alpha_monotonicity_scan, classical_q, d_alpha_z, line_scan, linear_grid, log_convexity_check, q_alpha_z,
    z_monotonicity_scan, State,
};
use logmaj::random::{haar_unitary, log_uniform_pd, random_pd, CaseRng};
use logmaj::{Matrix, Psd};

use super::{r6, run_cases, Checks};
use crate::config::RunConfig;
use crate::report::CaseRecord;

pub const CASES: usize = 200;
pub const Z_VALUES: [f64; 3] = [0.5, 1.0, 2.0];
pub const CONVEXITY_PAIRS: [(f64, f64); 3] = [(0.5, 2.5), (0.0, 1.5), (1.2, 3.0)];
const THETAS: [f64; 3] = [0.25, 0.5, 0.75];
const Z_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
const ORACLE_ALPHAS: [f64; 7] = [0.0, 0.3, 0.5, 0.8, 1.5, 2.0, 3.0];
const LINES: [(f64, f64); 2] = [(1.0, 0.0), (0.5, 0.5)];

/// Full-rank density matrix; even cases use the Gram ensemble, odd cases a
/// log-uniform spectrum, which reaches condition numbers near `e^4`.
fn random_state(i: usize, m: usize, rng: &mut CaseRng) -> logmaj::Result<State<f64>> {
    let x: Psd = if i % 2 == 0 { random_pd(m, rng).into_psd() } else { log_uniform_pd(m, 2.0, rng).into_psd() };
    State::normalized(x)
}

fn commuting_pair(i: usize, m: usize, rng: &mut CaseRng) -> logmaj::Result<(Vec<f64>, Vec<f64>, State<f64>, State<f64>)> {
    let draw = |rng: &mut CaseRng| -> Vec<f64> {
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.5f64..1.5).exp()).collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    };
    let mut p = draw(rng);
    let q = draw(rng);
    // a singular ρ every third case: supports nested, Q finite for every α
    if i % 3 == 2 {
        p[0] = 0.0;
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
    }
    let u: Matrix = haar_unitary(m, rng);
    let rho = State::from_real_diagonal(&p)?.conjugate(&u)?;
    let sigma = State::from_real_diagonal(&q)?.conjugate(&u)?;
    Ok((p, q, rho, sigma))
}

pub fn run(cfg: &RunConfig) -> Vec<CaseRecord> {
    let t = &cfg.tol;
    let alpha_grid = linear_grid(0.0, 3.0, 41);
    run_cases("divergence", cfg, CASES, |i, rng| {
        let m = cfg.dim(2, 4, i);
        let rho = random_state(i, m, rng)?;
        let sigma = random_state(i + 1, m, rng)?;
        let mut c = Checks::new();

        let mut worst_alpha = f64::NEG_INFINITY;
        for z in Z_VALUES {
            let scan = alpha_monotonicity_scan(&rho, &sigma, z, &alpha_grid, t.divergence)?;
            worst_alpha = worst_alpha.max(scan.worst_decrease);
            c.check(format!("alpha-monotone@z={z}"), scan.monotone, -scan.worst_decrease.max(0.0));
            c.check(format!("straddle@z={z}"), scan.straddles_d1 == Some(true), 0.0);
        }
        c.note("worst_alpha_decrease", r6(worst_alpha));

        let mut worst_convexity = f64::INFINITY;
        for z in Z_VALUES {
            for (a1, a2) in CONVEXITY_PAIRS {
                let lc = log_convexity_check(&rho, &sigma, z, a1, a2, &THETAS, t.convexity)?;
                for row in &lc.rows {
                    worst_convexity = worst_convexity.min((row.rhs - row.lhs) / row.rhs.abs().max(1.0));
                }
                c.check(format!("log-convex@z={z},{a1},{a2}"), lc.holds, 0.0);
            }
        }
        c.note("worst_convexity_slack", r6(worst_convexity));

        for alpha in [0.5, 2.0] {
            let zs = z_monotonicity_scan(&rho, &sigma, alpha, &Z_GRID, t.divergence)?;
            c.check(format!("z-direction@alpha={alpha}"), zs.holds, -zs.worst_violation.max(0.0));
        }

        for (kappa, z0) in LINES {
            let lo = if z0 == 0.0 { 0.05 } else { 0.0 };
            let ls = line_scan(&rho, &sigma, kappa, z0, &linear_grid(lo, 3.0, 25), t.divergence)?;
            c.check(format!("line@{kappa},{z0}"), ls.monotone_up_to_one == Some(true), 0.0);
        }

        // unitary covariance of the divergence
        let u: Matrix = haar_unitary(m, rng);
        let (ru, su) = (rho.conjugate(&u)?, sigma.conjugate(&u)?);
        for alpha in [0.5, 2.0] {
            let d = d_alpha_z(&rho, &sigma, alpha, 1.0)?.value.to_f64();
            let du = d_alpha_z(&ru, &su, alpha, 1.0)?.value.to_f64();
            c.close(format!("unitary@alpha={alpha}"), du, d, t.invariance);
        }

        // commuting pair against the scalar formula, which does not depend on z
        let (p, q, rc, sc) = commuting_pair(i, m, rng)?;
        let mut worst_oracle: f64 = 0.0;
        for alpha in ORACLE_ALPHAS {
            let expected = classical_q(&p, &q, alpha);
            for z in Z_VALUES {
                let got = q_alpha_z(&rc, &sc, alpha, z)?.value.to_f64();
                let err = (got - expected).abs() / expected.abs().max(1.0);
                worst_oracle = worst_oracle.max(err);
            }
        }
        c.small("commuting-oracle", worst_oracle, t.commuting);
        c.note("oracle_error", r6(worst_oracle));
        c.note("m", m);
        Ok(c.finish())
    })
}
