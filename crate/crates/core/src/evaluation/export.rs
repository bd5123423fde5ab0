use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::{EvaluationReport, MatchedPair};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Full report as JSON.
    Json,
    /// One row per matched pair.
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format '{other}' (json, csv)"))),
        }
    }
}

#[derive(Serialize)]
struct DeltaRow<'a> {
    trial: &'a str,
    side: &'static str,
    kind: &'static str,
    truth_frame: usize,
    truth_time_s: f64,
    pred_frame: usize,
    pred_time_s: f64,
    delta_ms: f64,
}

pub fn write_report_json<W: Write>(report: &EvaluationReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report).map_err(|e| Error::Format(format!("report json: {e}")))?;
    writeln!(out).map_err(|e| Error::io("<report>", e))
}

/// Writes `trial,side,kind,truth_frame,truth_time_s,pred_frame,pred_time_s,delta_ms` rows.
pub fn write_deltas_csv<W: Write>(pairs: &[MatchedPair], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in pairs {
        w.serialize(DeltaRow {
            trial: &p.trial,
            side: p.truth.side.prefix(),
            kind: p.truth.kind.code(),
            truth_frame: p.truth.frame,
            truth_time_s: p.truth.time,
            pred_frame: p.predicted.frame,
            pred_time_s: p.predicted.time,
            delta_ms: p.delta * 1e3,
        })
        .map_err(|e| Error::Format(format!("delta csv: {e}")))?;
    }
    if pairs.is_empty() {
        w.write_record(["trial", "side", "kind", "truth_frame", "truth_time_s", "pred_frame", "pred_time_s", "delta_ms"])
            .map_err(|e| Error::Format(format!("delta csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::io("<deltas>", e))
}

/// Writes the report to `path` in the given format.
pub fn export_report(report: &EvaluationReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    match format {
        ReportFormat::Json => write_report_json(report, &mut out),
        ReportFormat::Csv => write_deltas_csv(&report.pairs, &mut out),
    }
    .map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn import_report<R: Read>(reader: R) -> Result<EvaluationReport> {
    let report: EvaluationReport = serde_json::from_reader(reader).map_err(|e| Error::Format(format!("report json: {e}")))?;
    if report.schema != super::REPORT_SCHEMA {
        return Err(Error::Format(format!("unsupported report schema {}", report.schema)));
    }
    Ok(report)
}

pub fn load_report(path: impl AsRef<Path>) -> Result<EvaluationReport> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    import_report(std::io::BufReader::new(file))
}
