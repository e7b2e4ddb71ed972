//! Run configuration: seed, tolerance table and dimension caps.

use serde::Serialize;

use crate::error::CliError;

/// Every tolerance a suite consults, settable by name with `--tol KEY=VAL`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Partial log-margins of majorization reports.
    pub margin: f64,
    /// Final (determinant / trace) identity of majorization reports.
    pub total: f64,
    /// Remark-style reductions that must match another checker exactly.
    pub reduction: f64,
    /// Monotonicity of divergence scans.
    pub divergence: f64,
    /// Log-convexity of `α ↦ Q_{α,z}`.
    pub convexity: f64,
    /// Commuting-case agreement with the scalar Rényi formula.
    pub commuting: f64,
    /// Lower bound on the trace-inequality gap.
    pub gt_gap: f64,
    /// Tail mass of the quadrature used on random triples.
    pub quad_eps: f64,
    /// Karcher solver residual.
    pub karcher_tol: f64,
    /// Two-variable reduction of the Karcher mean.
    pub two_point: f64,
    /// Permutation / congruence / self-duality invariances.
    pub invariance: f64,
    /// Compound-matrix compatibility of the Karcher mean.
    pub compound: f64,
    /// Rescaled-mean log-majorization margins.
    pub rescaled: f64,
    /// Lie–Trotter distance required at the smallest `q`.
    pub lie_trotter: f64,
    /// Recursion versus closed forms.
    pub expansion: f64,
    /// Trace identities and the quartic defect.
    pub defect: f64,
    /// Absolute floor of the finite-difference comparison.
    pub fd_floor: f64,
    /// Equality-condition verdicts.
    pub eq_tol: f64,
    /// Strict decrease required somewhere in the monotonicity probe.
    pub probe_margin: f64,
    /// Exactness of the commuting Lie–Trotter–Kato case.
    pub ltk_exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            margin: 1e-9,
            total: 1e-8,
            reduction: 1e-10,
            divergence: 1e-8,
            convexity: 1e-10,
            commuting: 1e-10,
            gt_gap: 1e-8,
            quad_eps: 1e-10,
            karcher_tol: 1e-12,
            two_point: 1e-10,
            invariance: 1e-8,
            compound: 1e-7,
            rescaled: 1e-8,
            lie_trotter: 1e-3,
            expansion: 1e-10,
            defect: 1e-9,
            fd_floor: 1e-6,
            eq_tol: 1e-7,
            probe_margin: 1e-6,
            ltk_exact: 1e-12,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 20] = [
        "margin",
        "total",
        "reduction",
        "divergence",
        "convexity",
        "commuting",
        "gt_gap",
        "quad_eps",
        "karcher_tol",
        "two_point",
        "invariance",
        "compound",
        "rescaled",
        "lie_trotter",
        "expansion",
        "defect",
        "fd_floor",
        "eq_tol",
        "probe_margin",
        "ltk_exact",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "margin" => &mut self.margin,
            "total" => &mut self.total,
            "reduction" => &mut self.reduction,
            "divergence" => &mut self.divergence,
            "convexity" => &mut self.convexity,
            "commuting" => &mut self.commuting,
            "gt_gap" => &mut self.gt_gap,
            "quad_eps" => &mut self.quad_eps,
            "karcher_tol" => &mut self.karcher_tol,
            "two_point" => &mut self.two_point,
            "invariance" => &mut self.invariance,
            "compound" => &mut self.compound,
            "rescaled" => &mut self.rescaled,
            "lie_trotter" => &mut self.lie_trotter,
            "expansion" => &mut self.expansion,
            "defect" => &mut self.defect,
            "fd_floor" => &mut self.fd_floor,
            "eq_tol" => &mut self.eq_tol,
            "probe_margin" => &mut self.probe_margin,
            "ltk_exact" => &mut self.ltk_exact,
            _ => return None,
        })
    }

    /// Applies one `KEY=VAL` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected KEY=VAL, got `{assignment}`")))?;
        let key = key.trim();
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance `{key}` needs a number, got `{value}`")))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(CliError::Usage(format!("tolerance `{key}` must be positive and finite")));
        }
        let slot = self
            .slot(key)
            .ok_or_else(|| CliError::Usage(format!("unknown tolerance `{key}`; known: {}", Self::KEYS.join(", "))))?;
        *slot = value;
        Ok(())
    }
}

/// Everything that determines a suite run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: Tolerances,
    /// Largest matrix dimension any suite generates.
    pub max_dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            tol: Tolerances::default(),
            max_dim: 6,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// Dimension `lo + i mod (span)`, capped at `max_dim`.
    pub fn dim(&self, lo: usize, hi: usize, i: usize) -> usize {
        let hi = hi.min(self.max_dim).max(lo);
        lo + i % (hi - lo + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        t.set("eq_tol=1e-6").unwrap();
        assert_eq!(t.eq_tol, 1e-6);
        assert!(t.set("nope=1").is_err());
        assert!(t.set("margin=-1").is_err());
        assert!(t.set("margin").is_err());
        for key in Tolerances::KEYS {
            assert!(t.clone().set(&format!("{key}=0.5")).is_ok(), "{key}");
        }
    }

    #[test]
    fn dims_cycle() {
        let cfg = RunConfig::default();
        let dims: Vec<usize> = (0..6).map(|i| cfg.dim(2, 6, i)).collect();
        assert_eq!(dims, vec![2, 3, 4, 5, 6, 2]);
        let small = RunConfig { max_dim: 3, ..cfg };
        assert_eq!(small.dim(2, 6, 4), 2);
    }
}
