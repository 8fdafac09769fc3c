use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use super::fmt_scalar;
use crate::cg::{Breakdown, IterationTrace, QuadraticProblem, SolverConfig, TerminationReason};
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::verify::{Index, VerificationReport};

pub const FORMAT_VERSION: &str = "lincg-trace/1";

const TABULAR_HEADER: &str = "k,alpha,beta,grad_norm,objective";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    /// One JSON document.
    Structured,
    /// Comma-separated rows, one per iteration, after `#` metadata lines.
    Tabular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub problem: String,
    pub n: usize,
    pub config: SolverConfig,
    pub initial_gradient_norm: f64,
    pub gradient_tolerance: f64,
    pub iteration_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub k: usize,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub grad_norm: f64,
    pub objective: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminationSummary {
    pub terminated_at: usize,
    pub reason: TerminationReason,
    pub final_grad_norm: f64,
    pub final_objective: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<Breakdown>,
}

/// Serializable view of a solve, optionally with its verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub metadata: Metadata,
    pub records: Vec<RecordRow>,
    pub termination: TerminationSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

impl TraceDocument {
    /// Per-iteration scalars always; `x_k`, `g_k`, `d_k` only when
    /// `include_vectors` is set.
    pub fn from_trace(
        trace: &IterationTrace,
        problem: &QuadraticProblem,
        description: &str,
        include_vectors: bool,
    ) -> Result<Self> {
        let records = trace
            .records
            .iter()
            .map(|r| {
                Ok(RecordRow {
                    k: r.k,
                    alpha: r.alpha,
                    beta: r.beta,
                    grad_norm: norm(&r.g),
                    objective: problem.objective(&r.x)?,
                    x: include_vectors.then(|| r.x.clone()),
                    g: include_vectors.then(|| r.g.clone()),
                    d: include_vectors.then(|| r.d.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            metadata: Metadata {
                version: FORMAT_VERSION.to_string(),
                problem: description.to_string(),
                n: problem.dim(),
                config: trace.config,
                initial_gradient_norm: trace.initial_gradient_norm,
                gradient_tolerance: trace.gradient_tolerance,
                iteration_cap: trace.iteration_cap,
                timestamp_unix: None,
            },
            records,
            termination: TerminationSummary {
                terminated_at: trace.terminated_at(),
                reason: trace.reason,
                final_grad_norm: norm(&trace.terminal.g),
                final_objective: problem.objective(&trace.terminal.x)?,
                final_x: include_vectors.then(|| trace.terminal.x.clone()),
                breakdown: trace.breakdown,
            },
            verification: None,
        })
    }

    pub fn with_verification(mut self, report: VerificationReport) -> Self {
        self.verification = Some(report);
        self
    }

    pub fn with_timestamp(mut self, unix_seconds: u64) -> Self {
        self.metadata.timestamp_unix = Some(unix_seconds);
        self
    }
}

pub fn write_trace<W: Write>(doc: &TraceDocument, format: TraceFormat, mut w: W) -> Result<()> {
    match format {
        TraceFormat::Structured => {
            serde_json::to_writer_pretty(&mut w, doc)?;
            writeln!(w)?;
        }
        TraceFormat::Tabular => {
            let m = &doc.metadata;
            writeln!(w, "# version: {}", m.version)?;
            writeln!(w, "# problem: {}", m.problem)?;
            writeln!(w, "# n: {}", m.n)?;
            writeln!(
                w,
                "# config: stepsize={:?} beta={:?} gradient_update={:?}",
                m.config.stepsize, m.config.beta, m.config.gradient_update
            )?;
            writeln!(w, "# gradient_tolerance: {}", fmt_scalar(m.gradient_tolerance))?;
            if let Some(t) = m.timestamp_unix {
                writeln!(w, "# timestamp_unix: {t}")?;
            }
            writeln!(
                w,
                "# terminated_at: {} reason: {:?}",
                doc.termination.terminated_at, doc.termination.reason
            )?;
            writeln!(w, "{TABULAR_HEADER}")?;
            for r in &doc.records {
                let beta = r.beta.map(fmt_scalar).unwrap_or_default();
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.k,
                    fmt_scalar(r.alpha),
                    beta,
                    fmt_scalar(r.grad_norm),
                    fmt_scalar(r.objective)
                )?;
            }
        }
    }
    Ok(())
}

pub fn read_trace<R: Read>(reader: R) -> Result<TraceDocument> {
    Ok(serde_json::from_reader(reader)?)
}

/// Parses the row section of a tabular trace. Vector fields come back empty.
pub fn parse_tabular<R: BufRead>(reader: R) -> Result<Vec<RecordRow>> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let no = i + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim() != TABULAR_HEADER {
                return Err(Error::Parse {
                    line: no,
                    message: format!("expected header {TABULAR_HEADER:?}"),
                });
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: no,
                message: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let num = |t: &str| -> Result<f64> {
            t.parse().map_err(|_| Error::Parse {
                line: no,
                message: format!("bad number {t:?}"),
            })
        };
        rows.push(RecordRow {
            k: fields[0].parse().map_err(|_| Error::Parse {
                line: no,
                message: format!("bad index {:?}", fields[0]),
            })?,
            alpha: num(fields[1])?,
            beta: if fields[2].is_empty() {
                None
            } else {
                Some(num(fields[2])?)
            },
            grad_norm: num(fields[3])?,
            objective: num(fields[4])?,
            x: None,
            g: None,
            d: None,
        });
    }
    if !header_seen {
        return Err(Error::Parse {
            line: 0,
            message: "missing header row".into(),
        });
    }
    Ok(rows)
}

/// One row per residual: `check,identity,i,j,raw,normalized,tolerance,pass`.
pub fn write_report_tabular<W: Write>(report: &VerificationReport, mut w: W) -> Result<()> {
    writeln!(w, "# relaxed: {}", report.policy.relaxed)?;
    if let Some(c) = report.policy.condition_estimate {
        writeln!(w, "# condition_estimate: {}", fmt_scalar(c))?;
    }
    writeln!(w, "# note: {}", report.policy.note)?;
    writeln!(w, "check,identity,i,j,raw,normalized,tolerance,pass")?;
    for check in &report.checks {
        for r in &check.residuals {
            let (i, j) = match r.index {
                Index::Single(i) => (i.to_string(), String::new()),
                Index::Pair(i, j) => (i.to_string(), j.to_string()),
            };
            writeln!(
                w,
                "{:?},{:?},{i},{j},{},{},{},{}",
                check.kind,
                r.id,
                fmt_scalar(r.raw),
                fmt_scalar(r.normalized),
                fmt_scalar(r.tolerance),
                r.pass
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cg::{solve, SolverConfig};
    use crate::linalg::{SpdMatrix, SymMatrix};
    use crate::verify::Verifier;

    fn worked() -> QuadraticProblem {
        let a = SpdMatrix::new(SymMatrix::diagonal(&[2.0, 1.0]).unwrap()).unwrap();
        QuadraticProblem::new(a, vec![-2.0, -1.0]).unwrap()
    }

    fn doc(x0: &[f64], vectors: bool) -> TraceDocument {
        let p = worked();
        let out = solve(&p, x0, &SolverConfig::traced()).unwrap();
        TraceDocument::from_trace(&out.trace, &p, "worked", vectors).unwrap()
    }

    #[test]
    fn tabular_worked_rows() {
        let mut buf = Vec::new();
        write_trace(&doc(&[0.0, 0.0], false), TraceFormat::Tabular, &mut buf).unwrap();
        let rows = parse_tabular(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].k, 0);
        assert!((rows[0].alpha - 5.0 / 9.0).abs() < 1e-15);
        assert!((rows[0].grad_norm - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(rows[0].beta, None);
        assert!((rows[1].alpha - 0.9).abs() < 1e-15);
        assert!((rows[1].beta.unwrap() - 4.0 / 81.0).abs() < 1e-16);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("5.5555555555555558e-1"), "{text}");
    }

    #[test]
    fn empty_run_is_header_only() {
        let mut buf = Vec::new();
        write_trace(&doc(&[1.0, 1.0], false), TraceFormat::Tabular, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().any(|l| l == TABULAR_HEADER));
        assert!(text.starts_with("# version"));
        assert!(parse_tabular(buf.as_slice()).unwrap().is_empty());
    }

    #[test]
    fn tabular_scalars_round_trip_exactly() {
        let d = doc(&[0.3, -0.7], false);
        let mut buf = Vec::new();
        write_trace(&d, TraceFormat::Tabular, &mut buf).unwrap();
        let rows = parse_tabular(buf.as_slice()).unwrap();
        assert_eq!(rows, d.records);
    }

    #[test]
    fn structured_round_trip_with_report() {
        let p = worked();
        let out = solve(&p, &[0.0, 0.0], &SolverConfig::traced()).unwrap();
        let report = Verifier::default().all(&out.trace, &p).unwrap();
        let d = TraceDocument::from_trace(&out.trace, &p, "worked", true)
            .unwrap()
            .with_verification(report)
            .with_timestamp(12345);
        let mut buf = Vec::new();
        write_trace(&d, TraceFormat::Structured, &mut buf).unwrap();
        assert_eq!(read_trace(buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn vectors_only_when_verbose() {
        let d = doc(&[0.0, 0.0], false);
        assert!(d.records.iter().all(|r| r.x.is_none()));
        let mut buf = Vec::new();
        write_trace(&d, TraceFormat::Structured, &mut buf).unwrap();
        assert!(!String::from_utf8(buf).unwrap().contains("\"x\""));
        assert!(doc(&[0.0, 0.0], true).records[0].x.is_some());
    }

    #[test]
    fn tabular_parse_errors() {
        assert!(parse_tabular("k,a\n".as_bytes()).is_err());
        assert!(parse_tabular(format!("{TABULAR_HEADER}\n0,1,2\n").as_bytes()).is_err());
        assert!(parse_tabular("".as_bytes()).is_err());
    }

    #[test]
    fn report_table_has_rows() {
        let p = worked();
        let out = solve(&p, &[0.0, 0.0], &SolverConfig::traced()).unwrap();
        let report = Verifier::default().all(&out.trace, &p).unwrap();
        let mut buf = Vec::new();
        write_report_tabular(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let n_rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
        let n_res: usize = report.checks.iter().map(|c| c.residuals.len()).sum();
        assert_eq!(n_rows, n_res);
    }
}
