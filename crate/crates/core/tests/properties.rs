//! Randomized inequalities on small seeded inputs.

use proptest::prelude::*;

use logmaj::divergence::{alpha_monotonicity_scan, linear_grid, log_convexity_check, State};
use logmaj::expansion::{equality_case_check, lie_trotter_kato, EqualityCaseConfig};
use logmaj::golden_thompson::gt_check;
use logmaj::linalg::{UnitarilyInvariantNorm, ZeroPower};
use logmaj::majorization::{araki_pair, extended_araki, MajorizationTol};
use logmaj::means::{rescaled_mean_check, KarcherConfig, WeightVector};
use logmaj::quadrature::build_quadrature;
use logmaj::random::{case_rng, commuting_family, hermitian_in_range, log_uniform_pd, random_pd, random_psd_rank};
use logmaj::Pd;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn araki_on_singular_pairs(seed in any::<u64>(), m in 2usize..6, p in 0.05f64..0.95) {
        let mut rng = case_rng(seed, 0);
        let a = random_psd_rank::<f64, _>(m, m - 1, &mut rng);
        let b = random_pd::<f64, _>(m, &mut rng).into_psd();
        let cmp = araki_pair(&a, &b, p, MajorizationTol::default()).unwrap();
        prop_assert!(cmp.report.holds, "{:?}", cmp.report);
    }

    #[test]
    fn extended_araki_on_commuting_pairs(seed in any::<u64>(), m in 2usize..5, theta in 0.0f64..=1.0) {
        let mut rng = case_rng(seed, 1);
        let f = commuting_family::<f64, _>(m, 2, 1.0, 0.0, &mut rng);
        let g = commuting_family::<f64, _>(m, 2, 1.0, 0.0, &mut rng);
        for conv in [ZeroPower::Identity, ZeroPower::Support] {
            let cmp = extended_araki(&f[0], &f[1], &g[0], &g[1], theta, conv, MajorizationTol::default()).unwrap();
            prop_assert!(cmp.report.holds);
        }
    }

    #[test]
    fn divergence_monotone_and_log_convex(seed in any::<u64>(), m in 2usize..4) {
        let mut rng = case_rng(seed, 2);
        let rho = State::normalized(log_uniform_pd::<f64, _>(m, 1.5, &mut rng).into_psd()).unwrap();
        let sigma = State::normalized(log_uniform_pd::<f64, _>(m, 1.5, &mut rng).into_psd()).unwrap();
        let scan = alpha_monotonicity_scan(&rho, &sigma, 1.0, &linear_grid(0.0, 3.0, 13), 1e-8).unwrap();
        prop_assert!(scan.monotone, "worst decrease {}", scan.worst_decrease);
        let lc = log_convexity_check(&rho, &sigma, 1.0, 0.5, 2.5, &[0.25, 0.5, 0.75], 1e-10).unwrap();
        prop_assert!(lc.holds);
    }

    #[test]
    fn golden_thompson_triples(seed in any::<u64>(), m in 2usize..4) {
        let hs: Vec<_> = (0..3).map(|j| hermitian_in_range::<f64, _>(m, -1.0, 1.0, &mut case_rng(seed, 10 + j))).collect();
        let q = build_quadrature(0.0, 1e-10).unwrap();
        let rep = gt_check(&hs, 1.0, &q, 1e-8).unwrap();
        prop_assert!(rep.holds, "gap {}", rep.gap);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rescaled_means_between_bounds(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 3);
        let a: Vec<Pd> = (0..3).map(|_| log_uniform_pd(3, 1.0, &mut rng)).collect();
        let w = WeightVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let rep = rescaled_mean_check(&a, &w, 2.0, 1.0, &KarcherConfig::default(), MajorizationTol::uniform(1e-8)).unwrap();
        prop_assert!(rep.monotone.holds && rep.upper.holds);
    }

    #[test]
    fn ltk_errors_shrink(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 4);
        let a = random_psd_rank::<f64, _>(3, 2, &mut rng);
        let b = random_psd_rank::<f64, _>(3, 2, &mut rng);
        let ts: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let rep = lie_trotter_kato(&a, &b, &ts).unwrap();
        prop_assert!(rep.rows.last().unwrap().error < rep.rows[0].error);
    }
}

#[test]
fn equality_verdicts_split_commuting_from_generic() {
    let cfg = EqualityCaseConfig::default();
    let norm = UnitarilyInvariantNorm::FROBENIUS;
    let w = WeightVector::uniform(3);

    let commuting: Vec<Pd> = commuting_family::<f64, _>(3, 3, 1.0, 0.0, &mut case_rng(5, 0))
        .into_iter()
        .map(|x| Pd::new(x).unwrap())
        .collect();
    let rep = equality_case_check(&commuting, &w, norm, &cfg).unwrap();
    assert!(rep.consistent && rep.a.holds && rep.b.holds && rep.c.holds && rep.d.holds);

    let mut rng = case_rng(6, 0);
    let generic: Vec<Pd> = (0..3).map(|_| log_uniform_pd(3, 1.0, &mut rng)).collect();
    let rep = equality_case_check(&generic, &w, norm, &cfg).unwrap();
    assert!(rep.consistent && !rep.a.holds && !rep.d.holds);
}
