//! Randomized property suites. Each case draws its inputs from its own
//! seeded stream, so the report does not depend on scheduling.

use rayon::prelude::*;
use serde_json::{Map, Value};

use logmaj::random::{case_rng, CaseRng};

use crate::config::RunConfig;
use crate::report::{CaseOutcome, CaseRecord, SuiteReport, Summary};

pub mod araki;
pub mod divergence;
pub mod eqcase;
pub mod extended;
pub mod gt;
pub mod karcher;
pub mod ltk;
pub mod taylor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Araki,
    Extended,
    Divergence,
    Gt,
    Karcher,
    Taylor,
    Eqcase,
    Ltk,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Araki,
        Suite::Extended,
        Suite::Divergence,
        Suite::Gt,
        Suite::Karcher,
        Suite::Taylor,
        Suite::Eqcase,
        Suite::Ltk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Araki => "araki",
            Suite::Extended => "extended",
            Suite::Divergence => "divergence",
            Suite::Gt => "gt",
            Suite::Karcher => "karcher",
            Suite::Taylor => "taylor",
            Suite::Eqcase => "eqcase",
            Suite::Ltk => "ltk",
            Suite::All => "all",
        }
    }

    fn records(self, cfg: &RunConfig) -> Vec<CaseRecord> {
        match self {
            Suite::Araki => araki::run(cfg),
            Suite::Extended => extended::run(cfg),
            Suite::Divergence => divergence::run(cfg),
            Suite::Gt => gt::run(cfg),
            Suite::Karcher => karcher::run(cfg),
            Suite::Taylor => taylor::run(cfg),
            Suite::Eqcase => eqcase::run(cfg),
            Suite::Ltk => ltk::run(cfg),
            Suite::All => unreachable!("expanded by run_suite"),
        }
    }
}

/// Runs one suite, or every suite followed by an overall summary for [`Suite::All`].
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteReport {
    let parts: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut report = SuiteReport::default();
    for s in parts {
        let records = s.records(cfg);
        report.summaries.push(Summary::from_records(s.name(), &records, cfg.seed));
        report.records.extend(records);
    }
    if suite == Suite::All {
        let total = Summary::combine("all", &report.summaries, cfg.seed);
        report.summaries.push(total);
    }
    report
}

/// FNV-1a, used to give every suite its own family of case streams.
fn salt(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Evaluates `n` cases in parallel and returns them in index order. A module
/// error fails its case and is recorded; it does not stop the suite.
pub(crate) fn run_cases<F>(suite: &'static str, cfg: &RunConfig, n: usize, case: F) -> Vec<CaseRecord>
where
    F: Fn(usize, &mut CaseRng) -> logmaj::Result<CaseOutcome> + Sync,
{
    let seed = cfg.seed ^ salt(suite);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(seed, i as u64);
            match case(i, &mut rng) {
                Ok(out) => CaseRecord { suite, case: i, ok: out.ok, margin: out.margin, detail: out.detail, error: None },
                Err(e) => CaseRecord {
                    suite,
                    case: i,
                    ok: false,
                    margin: f64::NAN,
                    detail: Value::Null,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Accumulates named checks of one case.
///
/// Slack follows the report convention: for an inequality it is the raw
/// margin, for an identity it is `−|difference|`.
#[derive(Debug, Default)]
pub(crate) struct Checks {
    ok: bool,
    margin: f64,
    failed: Vec<String>,
    detail: Map<String, Value>,
}

impl Checks {
    pub fn new() -> Self {
        Self { ok: true, margin: f64::INFINITY, failed: Vec::new(), detail: Map::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, holds: bool, slack: f64) {
        if !holds {
            self.ok = false;
            self.failed.push(name.into());
        }
        if !slack.is_nan() {
            self.margin = self.margin.min(slack);
        }
    }

    /// `|a − b| ≤ tol·max(1, |b|)`.
    pub fn close(&mut self, name: impl Into<String>, a: f64, b: f64, tol: f64) {
        let diff = (a - b).abs();
        self.check(name, diff <= tol * b.abs().max(1.0), -diff);
    }

    /// Absolute bound `value ≤ tol` on a non-negative error.
    pub fn small(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.check(name, value <= tol, -value);
    }

    pub fn note(&mut self, key: &str, value: impl serde::Serialize) {
        self.detail.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn finish(mut self) -> CaseOutcome {
        if !self.failed.is_empty() {
            self.detail.insert("failed".into(), Value::from(self.failed));
        }
        CaseOutcome::new(self.ok, self.margin, Value::Object(self.detail))
    }
}

/// Rounds for the per-case detail so reports stay short; verdicts use full precision.
pub(crate) fn r6(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.6e}").parse().unwrap_or(x)
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_track_worst_slack() {
        let mut c = Checks::new();
        c.check("a", true, 0.5);
        c.close("b", 1.0, 1.0 + 1e-12, 1e-10);
        assert!(c.ok);
        c.small("c", 1e-3, 1e-6);
        let out = c.finish();
        assert!(!out.ok);
        assert_eq!(out.margin, -1e-3);
        assert_eq!(out.detail["failed"], serde_json::json!(["c"]));
    }

    #[test]
    fn cases_are_ordered_and_errors_recorded() {
        let cfg = RunConfig::default();
        let recs = run_cases("t", &cfg, 50, |i, _| {
            if i == 7 {
                Err(logmaj::Error::InvalidParameter("x".into()))
            } else {
                Ok(CaseOutcome::new(true, i as f64, Value::Null))
            }
        });
        assert!(recs.iter().enumerate().all(|(i, r)| r.case == i));
        assert!(!recs[7].ok && recs[7].error.is_some());
    }
}
