//! Check results and their JSON / CSV serializations.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::config::Config;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// How `observed` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// A residual that must not exceed the tolerance.
    Identity,
    /// U / L of a ratio family, plus stability under doubling.
    Ratio,
    /// A recorded finite bound, plus stability under doubling.
    Bound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub observed: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseResult {
    pub fn measured(case: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        let status = if observed <= tolerance { Status::Pass } else { Status::Fail };
        Self { case: case.into(), observed, tolerance, status, note: None }
    }

    /// A recorded value with no tolerance of its own.
    pub fn value(case: impl Into<String>, observed: f64) -> Self {
        let status = if observed.is_finite() { Status::Pass } else { Status::Fail };
        Self { case: case.into(), observed, tolerance: f64::INFINITY, status, note: None }
    }

    pub fn from_result(case: impl Into<String>, value: Result<f64>, tolerance: f64) -> Self {
        match value {
            Ok(v) => Self::measured(case, v, tolerance),
            Err(e) => Self::failed(case, tolerance, e.to_string()),
        }
    }

    pub fn failed(case: impl Into<String>, tolerance: f64, note: impl Into<String>) -> Self {
        Self { case: case.into(), observed: f64::NAN, tolerance, status: Status::Fail, note: Some(note.into()) }
    }

    pub fn skipped(case: impl Into<String>, note: impl Into<String>) -> Self {
        Self { case: case.into(), observed: f64::NAN, tolerance: f64::NAN, status: Status::Skipped, note: Some(note.into()) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub kind: CheckKind,
    pub status: Status,
    /// Largest residual (identity) or U / L (ratio) or U (bound).
    pub observed: f64,
    pub tolerance: f64,
    /// Recorded [L, U] for ratio and bound checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 2]>,
    /// Largest relative change of the recorded bounds (L and U for ratio
    /// checks, U for bound checks) when the resolution is doubled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub cases: Vec<CaseResult>,
}

impl VerificationReport {
    /// Identity check: passes when every case passes. Skipped cases are
    /// ignored; a check whose cases were all skipped is itself skipped.
    pub fn identity(check_id: impl Into<String>, tolerance: f64, cases: Vec<CaseResult>) -> Self {
        let status = aggregate(&cases);
        let observed = cases
            .iter()
            .filter(|c| c.status != Status::Skipped)
            .map(|c| if c.observed.is_nan() { f64::INFINITY } else { c.observed })
            .fold(0.0, f64::max);
        Self {
            check_id: check_id.into(),
            kind: CheckKind::Identity,
            status,
            observed,
            tolerance,
            bounds: None,
            drift: None,
            note: None,
            cases,
        }
    }

    /// Ratio check: the non-skipped case values must be positive and finite
    /// with U / L <= `span`, and L, U must move by at most `stability`
    /// (relative) in the doubled run `fine`.
    pub fn ratio(check_id: impl Into<String>, span: f64, stability: f64, cases: Vec<CaseResult>, fine: &[CaseResult]) -> Self {
        Self::interval(check_id, CheckKind::Ratio, span, stability, cases, fine)
    }

    /// Bound check: U must be finite and move by at most `stability` in the
    /// doubled run. `observed` is U; there is no tolerance on it.
    pub fn bound(check_id: impl Into<String>, stability: f64, cases: Vec<CaseResult>, fine: &[CaseResult]) -> Self {
        Self::interval(check_id, CheckKind::Bound, f64::INFINITY, stability, cases, fine)
    }

    fn interval(
        check_id: impl Into<String>,
        kind: CheckKind,
        span: f64,
        stability: f64,
        cases: Vec<CaseResult>,
        fine: &[CaseResult],
    ) -> Self {
        let check_id = check_id.into();
        let failed = cases.iter().any(|c| c.status == Status::Fail) || fine.iter().any(|c| c.status == Status::Fail);
        let base = extent(&cases);
        let doubled = extent(fine);
        let (bounds, drift) = match (base, doubled) {
            (Some(b), Some(d)) => {
                let upper = rel(b[1], d[1]);
                (Some(b), Some(if kind == CheckKind::Ratio { upper.max(rel(b[0], d[0])) } else { upper }))
            }
            (Some(b), None) => (Some(b), None),
            _ => (None, None),
        };
        let mut status = if base.is_none() { Status::Skipped } else { Status::Pass };
        let mut observed = f64::NAN;
        if let Some([lo, hi]) = bounds {
            observed = match kind {
                CheckKind::Ratio => hi / lo,
                _ => hi,
            };
            let in_span = match kind {
                CheckKind::Ratio => lo > 0.0 && observed <= span,
                _ => true,
            };
            let stable = drift.is_some_and(|d| d <= stability);
            if !(hi.is_finite() && in_span && stable) {
                status = Status::Fail;
            }
        }
        if failed {
            status = Status::Fail;
        }
        let note = Some(match kind {
            CheckKind::Ratio => format!("pass requires U/L <= {span} and drift <= {stability}"),
            _ => format!("pass requires finite U and drift <= {stability}"),
        });
        Self { check_id, kind, status, observed, tolerance: span, bounds, drift, note, cases }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// [min, max] over the measured (non-skipped, non-failed) cases.
fn extent(cases: &[CaseResult]) -> Option<[f64; 2]> {
    let mut values = cases.iter().filter(|c| c.status == Status::Pass).map(|c| c.observed).peekable();
    values.peek()?;
    Some(values.fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], v| [lo.min(v), hi.max(v)]))
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub(crate) fn aggregate(cases: &[CaseResult]) -> Status {
    if cases.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if cases.iter().all(|c| c.status == Status::Skipped) {
        Status::Skipped
    } else {
        Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    config: &'a Config,
    checks: &'a [VerificationReport],
}

pub fn render_json(reports: &[VerificationReport], config: &Config) -> Result<String> {
    let doc = Document { schema_version: SCHEMA_VERSION, config, checks: reports };
    let mut text = serde_json::to_string(&doc).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// One row per (check, case); a check without cases gets one summary row.
pub fn render_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(["check_id", "case", "observed", "tolerance", "status"]).map_err(io)?;
    for r in reports {
        if r.cases.is_empty() {
            let row = [r.check_id.clone(), "all".into(), r.observed.to_string(), r.tolerance.to_string(), r.status.as_str().into()];
            w.write_record(&row).map_err(io)?;
        }
        for c in &r.cases {
            let row = [r.check_id.clone(), c.case.clone(), c.observed.to_string(), c.tolerance.to_string(), c.status.as_str().into()];
            w.write_record(&row).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

pub fn render_report(reports: &[VerificationReport], config: &Config, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => render_json(reports, config),
        ReportFormat::Csv => render_csv(reports),
    }
}

pub fn emit_report(reports: &[VerificationReport], config: &Config, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(reports, config, format)?)?;
    Ok(())
}
