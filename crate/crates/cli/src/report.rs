//! Per-case records, suite summaries and their JSON-lines / CSV encodings.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::CliError;

/// Infinities as `"inf"`/`"-inf"`, NaN as `"nan"`; finite values unchanged.
pub fn extended<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_nan() {
        s.serialize_str("nan")
    } else if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

/// What a suite case function returns.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseOutcome {
    pub ok: bool,
    /// Smallest slack of the inequalities checked; negative beyond tolerance means failure.
    pub margin: f64,
    pub detail: Value,
}

impl CaseOutcome {
    pub fn new(ok: bool, margin: f64, detail: Value) -> Self {
        Self { ok, margin, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub suite: &'static str,
    pub case: usize,
    pub ok: bool,
    #[serde(serialize_with = "extended")]
    pub margin: f64,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub suite: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(serialize_with = "extended")]
    pub worst_margin: f64,
    pub seed: u64,
}

impl Summary {
    pub fn from_records(suite: &str, records: &[CaseRecord], seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            cases: records.len(),
            failures: records.iter().filter(|r| !r.ok).count(),
            worst_margin: worst(records.iter().map(|r| r.margin)),
            seed,
        }
    }

    /// Aggregate over several suites.
    pub fn combine(suite: &str, parts: &[Summary], seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            cases: parts.iter().map(|s| s.cases).sum(),
            failures: parts.iter().map(|s| s.failures).sum(),
            worst_margin: worst(parts.iter().map(|s| s.worst_margin)),
            seed,
        }
    }
}

/// Minimum over the non-NaN values; `+∞` if there are none.
fn worst(values: impl Iterator<Item = f64>) -> f64 {
    values.filter(|x| !x.is_nan()).fold(f64::INFINITY, f64::min)
}

/// Output encoding for `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Suite output: case records followed by summaries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteReport {
    pub records: Vec<CaseRecord>,
    pub summaries: Vec<Summary>,
}

impl SuiteReport {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut out = String::new();
        match format {
            Format::Json => {
                for r in &self.records {
                    out.push_str(&serde_json::to_string(r)?);
                    out.push('\n');
                }
                for s in &self.summaries {
                    out.push_str(&serde_json::to_string(s)?);
                    out.push('\n');
                }
            }
            Format::Csv => {
                out.push_str("suite,case,ok,margin,error\n");
                for r in &self.records {
                    let err = r.error.as_deref().unwrap_or("").replace('"', "'");
                    let _ = writeln!(out, "{},{},{},{},\"{}\"", r.suite, r.case, r.ok, csv_number(r.margin), err);
                }
                out.push_str("suite,cases,failures,worst_margin,seed\n");
                for s in &self.summaries {
                    let _ = writeln!(out, "{},{},{},{},{}", s.suite, s.cases, s.failures, csv_number(s.worst_margin), s.seed);
                }
            }
        }
        Ok(out)
    }

    pub fn render_summaries(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for s in &self.summaries {
            out.push_str(&serde_json::to_string(s)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.ok).count()
    }
}

pub fn csv_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rec(case: usize, ok: bool, margin: f64) -> CaseRecord {
        CaseRecord { suite: "t", case, ok, margin, detail: json!({}), error: None }
    }

    #[test]
    fn summary_counts() {
        let r = [rec(0, true, 0.5), rec(1, false, -2.0), rec(2, true, f64::NAN)];
        let s = Summary::from_records("t", &r, 7);
        assert_eq!((s.cases, s.failures, s.worst_margin), (3, 1, -2.0));
        let json = serde_json::to_string(&Summary::from_records("t", &[], 7)).unwrap();
        assert_eq!(json, r#"{"suite":"t","cases":0,"failures":0,"worst_margin":"inf","seed":7}"#);
    }

    #[test]
    fn csv_rows() {
        let report = SuiteReport { records: vec![rec(0, true, f64::NEG_INFINITY)], summaries: vec![] };
        let text = report.render(Format::Csv).unwrap();
        assert!(text.contains("t,0,true,-inf,\"\""));
    }
}
