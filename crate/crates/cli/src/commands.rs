//! Subcommand implementations. Each returns the report text and an exit status.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use logmaj::divergence::{
    alpha_monotonicity_scan, d_alpha_z, line_scan, linear_grid, q_alpha_z, z_monotonicity_scan, ScanRow, State,
};
use logmaj::expansion::{
    closed_form_coefficients, default_ltk_sequence, equality_case_check, finite_difference_taylor, lie_trotter_kato,
    taylor_coefficients, trace_identities, EqualityCaseConfig,
};
use logmaj::golden_thompson::{
    equality_triple, equality_triple_inputs, gt_check, gt_integrand, gt_log_majorization, trace_of_exp_product,
};
use logmaj::linalg::io::{format_matrix, parse_matrix, parse_weights};
use logmaj::linalg::{singular_values, UnitarilyInvariantNorm, ZeroPower};
use logmaj::majorization::{
    araki_pair, check_log_majorization_with, check_majorization, check_weak_majorization, CommutingQuad, MajorizationTol,
};
use logmaj::means::{
    geometric_mean_two, karcher_mean, log_euclidean_mean, power_mean, KarcherConfig, PowerMeanConfig, WeightVector,
};
use logmaj::quadrature::build_quadrature;
use logmaj::random::{random_psd, RandomKind};
use logmaj::{Hermitian, Matrix, Pd, Psd};

use crate::args::{Command, Convention, MeanKind, Order, ScanKind};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{csv_number, Format};
use crate::suites::run_suite;

/// Report text plus the process exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

impl Outcome {
    fn verdict(value: &impl Serialize, holds: bool) -> Result<Self, CliError> {
        Ok(Self { text: format!("{}\n", serde_json::to_string(value)?), exit: if holds { 0 } else { 1 } })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse { path: path.display().to_string(), message: e.to_string() }
}

fn matrix(path: &Path) -> Result<Matrix, CliError> {
    parse_matrix(&read(path)?).map_err(|e| parse_err(path, e))
}

fn hermitian(path: &Path) -> Result<Hermitian, CliError> {
    Hermitian::new(matrix(path)?).map_err(|e| parse_err(path, e))
}

fn psd(path: &Path) -> Result<Psd, CliError> {
    Psd::from_matrix(matrix(path)?).map_err(|e| parse_err(path, e))
}

fn pd(path: &Path) -> Result<Pd, CliError> {
    Pd::from_matrix(matrix(path)?).map_err(|e| parse_err(path, e))
}

fn weights(path: Option<&Path>, n: usize) -> Result<WeightVector<f64>, CliError> {
    match path {
        None => Ok(WeightVector::uniform(n)),
        Some(p) => {
            let w = parse_weights(&read(p)?).map_err(|e| parse_err(p, e))?;
            if w.len() != n {
                return Err(CliError::Usage(format!("{} weights for {n} matrices", w.len())));
            }
            WeightVector::new(w).map_err(|e| parse_err(p, e))
        }
    }
}

fn matrix_json(m: &Matrix) -> Value {
    serde_json::from_str(&format_matrix(m)).unwrap_or(Value::Null)
}

fn maj_tol(cfg: &RunConfig) -> MajorizationTol {
    MajorizationTol { margin: cfg.tol.margin, total: cfg.tol.total }
}

fn karcher_cfg(cfg: &RunConfig) -> KarcherConfig {
    KarcherConfig { tol: cfg.tol.karcher_tol, ..KarcherConfig::default() }
}

/// `trace`, `frobenius`, `operator`, `schatten:p`, `kyfan:k`.
pub fn parse_norm(s: &str) -> Result<UnitarilyInvariantNorm, CliError> {
    let bad = || CliError::Usage(format!("unknown norm `{s}`"));
    let norm = match s.split_once(':') {
        None => match s {
            "trace" => UnitarilyInvariantNorm::TRACE,
            "frobenius" => UnitarilyInvariantNorm::FROBENIUS,
            "operator" => UnitarilyInvariantNorm::Operator,
            _ => return Err(bad()),
        },
        Some(("schatten", p)) => UnitarilyInvariantNorm::Schatten(p.parse().map_err(|_| bad())?),
        Some(("kyfan", k)) => UnitarilyInvariantNorm::KyFan(k.parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    norm.validate().map_err(|e| CliError::Usage(e.to_string()))
}

/// `lo:hi:n` or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid must be `lo:hi:n` or a comma list, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return Ok(linear_grid(lo, hi, n));
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// `pd`, `psd-rank:r`, `commuting-family:n`, `log-uniform:radius`.
pub fn parse_kind(s: &str) -> Result<RandomKind, CliError> {
    let bad = || CliError::Usage(format!("unknown random kind `{s}`"));
    Ok(match s.split_once(':') {
        None if s == "pd" => RandomKind::Pd,
        Some(("psd-rank", r)) => RandomKind::PsdRank { rank: r.parse().map_err(|_| bad())? },
        Some(("commuting-family", n)) => RandomKind::CommutingFamily { n: n.parse().map_err(|_| bad())? },
        Some(("log-uniform", r)) => RandomKind::LogUniform { radius: r.parse().map_err(|_| bad())? },
        _ => return Err(bad()),
    })
}

fn rows_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("alpha,z,value,finite\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.alpha, r.z, csv_number(r.value), r.finite);
    }
    out
}

pub fn execute(command: Command, cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let tol = maj_tol(cfg);
    match command {
        Command::Majorize { a, b, kind, singular } => {
            let spectrum = |p: &Path| -> Result<Vec<f64>, CliError> {
                Ok(if singular {
                    singular_values(&matrix(p)?)?.into_vec()
                } else {
                    hermitian(p)?.eigenvalues()?.into_vec()
                })
            };
            let (x, y) = (spectrum(&a)?, spectrum(&b)?);
            let rep = match kind {
                Order::Log => check_log_majorization_with(&x, &y, tol)?,
                Order::Weak => check_weak_majorization(&x, &y, tol.margin)?,
                Order::Sum => check_majorization(&x, &y, tol)?,
            };
            Outcome::verdict(&json!({"lhs": x, "rhs": y, "report": rep}), rep.holds)
        }
        Command::Araki { a, b, p } => {
            let cmp = araki_pair(&psd(&a)?, &psd(&b)?, p, tol)?;
            let holds = cmp.report.holds;
            Outcome::verdict(&cmp, holds)
        }
        Command::ArakiExt { a1, a2, b1, b2, theta, conv, norm, r } => {
            let (a1, a2, b1, b2) = (psd(&a1)?, psd(&a2)?, psd(&b1)?, psd(&b2)?);
            let conv = match conv {
                Convention::Identity => ZeroPower::Identity,
                Convention::Support => ZeroPower::Support,
            };
            let quad = CommutingQuad::new(&a1, &a2, &b1, &b2)?;
            let ev = quad.eigenvalue_form(theta, conv, tol)?;
            let sv = quad.singular_value_form(theta, conv, tol)?;
            let mut holds = ev.report.holds && sv.report.holds;
            let norm_cmp = match norm {
                Some(n) => {
                    let c = quad.norm_form(theta, r, parse_norm(&n)?, conv, tol.margin)?;
                    holds &= c.holds;
                    Some(c)
                }
                None => None,
            };
            Outcome::verdict(&json!({"theta": theta, "eigenvalue": ev, "singular_value": sv, "norm": norm_cmp}), holds)
        }
        Command::Mean { matrices, kind, weights: wpath, alpha, mean_out } => {
            let a: Vec<Pd> = matrices.iter().map(|p| pd(p)).collect::<Result<_, _>>()?;
            let w = weights(wpath.as_deref(), a.len())?;
            let mut record = serde_json::Map::new();
            let mean = match kind {
                MeanKind::Karcher => {
                    let sol = karcher_mean(&a, &w, &karcher_cfg(cfg))?;
                    record.insert("residual".into(), json!(sol.residual));
                    record.insert("iterations".into(), json!(sol.iterations));
                    record.insert("step_halvings".into(), json!(sol.step_halvings));
                    sol.mean
                }
                MeanKind::Le => log_euclidean_mean(&a, &w)?,
                MeanKind::Power => {
                    let t = alpha.ok_or_else(|| CliError::Usage("power mean needs --alpha".into()))?;
                    power_mean(&a, &w, t, &PowerMeanConfig::default())?
                }
                MeanKind::Geo2 => {
                    if a.len() != 2 {
                        return Err(CliError::Usage("geo2 takes exactly two matrices".into()));
                    }
                    geometric_mean_two(&a[0], &a[1], alpha.unwrap_or(0.5))?
                }
            };
            record.insert("kind".into(), json!(format!("{kind:?}").to_lowercase()));
            record.insert("eigenvalues".into(), json!(mean.spectrum().as_slice()));
            match mean_out {
                Some(p) => write(&p, &format_matrix(mean.matrix()))?,
                None => {
                    record.insert("mean".into(), matrix_json(mean.matrix()));
                }
            }
            Outcome::verdict(&record, true)
        }
        Command::Divergence { rho, sigma, alpha, z, scan, kappa, z0, grid, csv } => {
            let rho = State::new(psd(&rho)?)?;
            let sigma = State::new(psd(&sigma)?)?;
            let grid = grid.as_deref().map(parse_grid).transpose()?;
            let t = cfg.tol.divergence;
            let (value, rows, holds) = match scan {
                None => {
                    let d = if alpha == 1.0 {
                        logmaj::divergence::d1_normalized(&rho, &sigma)?
                    } else {
                        d_alpha_z(&rho, &sigma, alpha, z)?
                    };
                    let q = q_alpha_z(&rho, &sigma, alpha, z)?;
                    (json!({"alpha": alpha, "z": z, "d": d, "q": q}), vec![], true)
                }
                Some(ScanKind::Alpha) => {
                    let g = grid.unwrap_or_else(|| linear_grid(0.0, 3.0, 41));
                    let s = alpha_monotonicity_scan(&rho, &sigma, z, &g, t)?;
                    let holds = s.monotone && s.straddles_d1 != Some(false);
                    (serde_json::to_value(&s)?, s.rows, holds)
                }
                Some(ScanKind::Z) => {
                    let g = grid.unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0, 4.0]);
                    let s = z_monotonicity_scan(&rho, &sigma, alpha, &g, t)?;
                    (serde_json::to_value(&s)?, s.rows.clone(), s.holds)
                }
                Some(ScanKind::Line) => {
                    let g = grid.unwrap_or_else(|| linear_grid(0.05, 3.0, 60));
                    let s = line_scan(&rho, &sigma, kappa, z0, &g, t)?;
                    (serde_json::to_value(&s)?, s.rows.clone(), s.monotone_up_to_one != Some(false))
                }
            };
            if let Some(p) = csv {
                write(&p, &rows_csv(&rows))?;
            }
            if format == Format::Csv && !rows.is_empty() {
                return Ok(Outcome { text: rows_csv(&rows), exit: if holds { 0 } else { 1 } });
            }
            Outcome::verdict(&value, holds)
        }
        Command::Gt { matrices, r, theta, eps, equality_triple: triple, csv } => {
            let mut extra = serde_json::Map::new();
            let hs: Vec<Hermitian> = if triple {
                let (h, k) = equality_triple_inputs();
                let (hs, comm) = equality_triple(&h, &k)?;
                extra.insert("commutators".into(), serde_json::to_value(&comm)?);
                extra.insert("trace_of_product".into(), json!(trace_of_exp_product(&hs)?));
                hs.to_vec()
            } else {
                if matrices.is_empty() {
                    return Err(CliError::Usage("gt needs matrix files or --equality-triple".into()));
                }
                matrices.iter().map(|p| hermitian(p)).collect::<Result<_, _>>()?
            };
            if theta == 0.0 {
                let quad = build_quadrature(0.0, eps)?;
                let rep = gt_check(&hs, r, &quad, cfg.tol.gt_gap)?;
                if let Some(p) = csv {
                    let mut out = String::from("t,weight,value\n");
                    for (&t, &w) in quad.nodes.iter().zip(&quad.weights) {
                        let _ = writeln!(out, "{t:e},{w:e},{:e}", gt_integrand(&hs, r, t)?);
                    }
                    write(&p, &out)?;
                }
                let holds = rep.holds;
                let mut v = serde_json::to_value(&rep)?;
                if let Value::Object(map) = &mut v {
                    map.extend(extra);
                }
                Outcome::verdict(&v, holds)
            } else {
                let quad = if theta < 1.0 { Some(build_quadrature(theta, eps)?) } else { None };
                let floor = 10.0 * eps;
                let t = MajorizationTol { margin: tol.margin.max(floor), total: tol.total.max(floor) };
                let rep = gt_log_majorization(&hs, theta, r, quad.as_ref(), t)?;
                Outcome::verdict(&json!({"theta": theta, "r": r, "log_majorization": rep}), rep.holds)
            }
        }
        Command::Taylor { matrices, weights: wpath, order, fd_step } => {
            let hs: Vec<Hermitian> = matrices.iter().map(|p| hermitian(p)).collect::<Result<_, _>>()?;
            let w = weights(wpath.as_deref(), hs.len())?;
            let state = taylor_coefficients(&hs, &w, order)?;
            let ids = trace_identities(&hs, &w, &state);
            let mut record = json!({
                "order": order,
                "x": state.x[1..].iter().map(matrix_json).collect::<Vec<_>>(),
                "y": state.y[1..].iter().map(matrix_json).collect::<Vec<_>>(),
                "trace_identities": ids,
            });
            let raw: Vec<Matrix> = hs.iter().map(|h| h.matrix().clone()).collect();
            let closed = closed_form_coefficients(&raw, w.as_slice())?;
            let closed_err = (1..=order.min(4))
                .map(|k| state.x[k].distance(&closed.x[k - 1]).max(state.y[k].distance(&closed.y[k - 1])))
                .fold(0.0, f64::max);
            record["closed_form_error"] = json!(closed_err);
            if let Some(h) = fd_step {
                let fd = finite_difference_taylor(&hs, &w, order.min(4), h, &karcher_cfg(cfg))?;
                let errors: Vec<f64> = fd.coeffs.iter().enumerate().map(|(i, x)| x.distance(&state.x[i + 1])).collect();
                record["finite_difference"] = json!({"h": h, "errors": errors, "estimates": fd.error_estimates});
            }
            Outcome::verdict(&record, closed_err <= cfg.tol.expansion)
        }
        Command::Eqcase { matrices, weights: wpath, norm, t } => {
            let a: Vec<Pd> = matrices.iter().map(|p| pd(p)).collect::<Result<_, _>>()?;
            let w = weights(wpath.as_deref(), a.len())?;
            let norm = parse_norm(&norm)?;
            let ec = EqualityCaseConfig { eq_tol: cfg.tol.eq_tol, t_probe: t, karcher: karcher_cfg(cfg), ..Default::default() };
            let rep = equality_case_check(&a, &w, norm, &ec)?;
            Outcome::verdict(&rep, rep.consistent)
        }
        Command::Ltk { a, b, ts } => {
            let ts = if ts.is_empty() { default_ltk_sequence() } else { ts };
            let rep = lie_trotter_kato(&psd(&a)?, &psd(&b)?, &ts)?;
            let record = json!({
                "target": matrix_json(&rep.target),
                "limit_estimate": matrix_json(&rep.limit_estimate),
                "rows": rep.rows,
                "decreasing": rep.decreasing,
                "exact": rep.exact,
            });
            Outcome::verdict(&record, rep.decreasing || rep.exact)
        }
        Command::Random { m, kind } => {
            let mats = random_psd::<f64>(m, cfg.seed, parse_kind(&kind)?)?;
            let text: String = mats.iter().map(|x| format_matrix(x.matrix())).collect();
            Ok(Outcome { text, exit: 0 })
        }
        Command::Run { suite, max_dim } => {
            if max_dim < 2 {
                return Err(CliError::Usage("--max-dim must be at least 2".into()));
            }
            let cfg = RunConfig { max_dim, ..cfg.clone() };
            let report = run_suite(suite, &cfg);
            let exit = if report.failures() == 0 { 0 } else { 1 };
            Ok(Outcome { text: report.render(format)?, exit })
        }
    }
}
