//! Gauss–Legendre rules and the `β_θ` probability measure on the real line.
//!
//! `dβ_θ(t) = sin(πθ) / (2θ(cosh(πt) + cos(πθ))) dt` for `0 < θ < 1`, and its
//! pointwise limit `π / (2(cosh(πt) + 1)) dt` at `θ = 0`. The density decays
//! like `e^{−π|t|}`, so a truncated composite rule on `[−T, T]` captures all
//! but a known amount of mass.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default Gauss–Legendre order per panel.
pub const DEFAULT_ORDER: usize = 16;
/// Default upper bound on the panel width.
pub const DEFAULT_PANEL_WIDTH: f64 = 0.5;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("θ must lie in [0, 1), got {theta}")));
    }
    Ok(())
}

/// Density of `β_θ` at `t`.
pub fn beta_density(theta: f64, t: f64) -> Result<f64> {
    check_theta(theta)?;
    let c = (PI * t).cosh();
    Ok(if theta == 0.0 {
        PI / (2.0 * (c + 1.0))
    } else {
        (PI * theta).sin() / (2.0 * theta * (c + (PI * theta).cos()))
    })
}

/// `C` with `β_θ(t) ≤ C e^{−π|t|}` whenever `e^{π|t|} ≥ 2`.
pub fn tail_constant(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if theta == 0.0 {
        return Ok(PI);
    }
    let c = (PI * theta).cos();
    Ok((PI * theta).sin() / (theta * (1.0 + c.min(0.0))))
}

/// Composite Gauss–Legendre discretization of `β_θ` on `[−T, T]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaQuadrature {
    pub theta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub truncation: f64,
    /// Upper bound on the mass of `β_θ` outside `[−T, T]`.
    pub tail_bound: f64,
    pub eps: f64,
}

impl BetaQuadrature {
    /// `Σ w_k`.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k f(t_k)`, summed in node order.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(t)?;
        }
        Ok(acc)
    }
}

/// Quadrature with tail mass below `eps`, using the default order and panel width.
pub fn build_quadrature(theta: f64, eps: f64) -> Result<BetaQuadrature> {
    build_quadrature_with(theta, eps, DEFAULT_ORDER, DEFAULT_PANEL_WIDTH)
}

pub fn build_quadrature_with(theta: f64, eps: f64, order: usize, panel_width: f64) -> Result<BetaQuadrature> {
    check_theta(theta)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0, 1), got {eps}")));
    }
    if order == 0 || !(panel_width > 0.0) {
        return Err(Error::InvalidParameter("order and panel width must be positive".into()));
    }
    let c = tail_constant(theta)?;
    // two tails of C e^{−πt} beyond T carry 2C e^{−πT}/π
    let truncation = ((2.0 * c / (PI * eps)).ln() / PI).max(2f64.ln() / PI);
    let tail_bound = 2.0 * c * (-PI * truncation).exp() / PI;
    let panels = ((2.0 * truncation) / panel_width).ceil() as usize;
    let h = 2.0 * truncation / panels as f64;
    let (x, w) = gauss_legendre(order);
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = -truncation + h * (p as f64 + 0.5);
        for (&xi, &wi) in x.iter().zip(&w) {
            let t = mid + 0.5 * h * xi;
            nodes.push(t);
            weights.push(0.5 * h * wi * beta_density(theta, t)?);
        }
    }
    Ok(BetaQuadrature { theta, nodes, weights, truncation, tail_bound, eps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for k in 0..32 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
            assert!((got - exact).abs() < 1e-14, "degree {k}");
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        let (x, _) = gauss_legendre(5);
        assert_eq!(x[2], 0.0);
    }

    #[test]
    fn density_examples() {
        assert!((beta_density(0.0, 0.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((beta_density(0.5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(beta_density(0.3, 1.7).unwrap(), beta_density(0.3, -1.7).unwrap());
        assert!(beta_density(1.0, 0.0).is_err());
        assert!(beta_density(-0.1, 0.0).is_err());
        // θ → 0 limit is continuous
        assert!((beta_density(1e-7, 0.4).unwrap() - beta_density(0.0, 0.4).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_dominates_density() {
        for theta in [0.0, 0.3, 0.5, 0.7, 0.95] {
            let c = tail_constant(theta).unwrap();
            for i in 0..200 {
                let t = 2f64.ln() / PI + 0.05 * i as f64;
                assert!(beta_density(theta, t).unwrap() <= c * (-PI * t).exp() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn mass_is_one_up_to_tail() {
        for theta in [0.0, 0.3, 0.7] {
            for eps in [1e-6, 1e-8, 1e-10] {
                let q = build_quadrature(theta, eps).unwrap();
                let mass = q.mass();
                assert!(mass <= 1.0 + 1e-13 && mass >= 1.0 - 2.0 * eps, "θ={theta} ε={eps}: {mass}");
                assert!(q.tail_bound <= eps * (1.0 + 1e-12));
                assert!(q.nodes.iter().zip(q.nodes.iter().rev()).all(|(a, b)| (a + b).abs() < 1e-13));
            }
        }
    }

    #[test]
    fn smaller_eps_widens_truncation() {
        let a = build_quadrature(0.0, 1e-8).unwrap();
        let b = build_quadrature(0.0, 0.5e-8).unwrap();
        assert!(b.truncation > a.truncation);
        let expected = (2.0 * PI / (PI * 1e-8)).ln() / PI;
        assert!((a.truncation - expected).abs() < 1e-12);
    }

    #[test]
    fn higher_order_agrees() {
        let a = build_quadrature_with(0.0, 1e-10, 16, 0.5).unwrap();
        let b = build_quadrature_with(0.0, 1e-10, 32, 0.5).unwrap();
        let f = |t: f64| Ok((2.0 * t).cos() + 0.1 * t * t);
        let (x, y) = (a.integrate(f).unwrap(), b.integrate(f).unwrap());
        assert!((x - y).abs() < 1e-13 * x.abs().max(1.0));
    }
}
