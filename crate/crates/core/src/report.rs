//! Deterministic report rendering.
//!
//! Reports are bit-stable for identical inputs: JSON objects keep their keys
//! sorted, fractional values are rounded to six decimal digits, and list
//! fields arrive pre-sorted from [`crate::corpus`].

use std::io::{self, Write};

use serde_json::{json, Value};

use crate::corpus::{CorpusStats, LambdaRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

fn round6(x: f64) -> f64 {
    (x * 1_000_000.0).round() / 1_000_000.0
}

/// Write a report for `stats`, plus per-lambda records when provided
/// (JSON only; the CSV format is scalar rows).
pub fn write_report<W: Write>(
    stats: &CorpusStats,
    records: Option<&[LambdaRecord]>,
    format: ReportFormat,
    mut out: W,
) -> io::Result<()> {
    match format {
        ReportFormat::Json => {
            let value = json_value(stats, records);
            serde_json::to_writer_pretty(&mut out, &value)?;
            out.write_all(b"\n")
        }
        ReportFormat::Csv => write_csv(stats, out),
    }
}

/// Render a report to a string.
pub fn render_report(
    stats: &CorpusStats,
    records: Option<&[LambdaRecord]>,
    format: ReportFormat,
) -> String {
    let mut buf = Vec::new();
    write_report(stats, records, format, &mut buf).expect("in-memory write cannot fail");
    String::from_utf8(buf).expect("reports are UTF-8")
}

fn json_value(stats: &CorpusStats, records: Option<&[LambdaRecord]>) -> Value {
    // serde_json maps are sorted by key, which keeps the output stable.
    let mut value = json!({
        "files_scanned": stats.files_scanned,
        "files_with_lambdas": stats.files_with_lambdas,
        "total_lambdas": stats.total_lambdas,
        "unique_lambdas": stats.unique_lambdas,
        "line_count_histogram": stats.line_count_histogram,
        "param_count_histogram": stats.param_count_histogram,
        "explicit_count": stats.explicit_count,
        "implicit_count": stats.implicit_count,
        "comment_coverage": stats.comment_coverage,
        "exception_unique_fraction": round6(stats.exception_unique_fraction),
        "duplicates": stats.duplicates,
        "skipped": stats.skipped,
    });
    if let Some(records) = records {
        value["lambdas"] = serde_json::to_value(records).expect("records serialize");
    }
    value
}

fn write_csv<W: Write>(stats: &CorpusStats, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let scalar = |w: &mut csv::Writer<W>, key: &str, value: String| -> io::Result<()> {
        w.write_record([key, &value]).map_err(io_error)
    };

    scalar(&mut w, "files_scanned", stats.files_scanned.to_string())?;
    scalar(
        &mut w,
        "files_with_lambdas",
        stats.files_with_lambdas.to_string(),
    )?;
    scalar(&mut w, "total_lambdas", stats.total_lambdas.to_string())?;
    scalar(&mut w, "unique_lambdas", stats.unique_lambdas.to_string())?;
    scalar(&mut w, "explicit_count", stats.explicit_count.to_string())?;
    scalar(&mut w, "implicit_count", stats.implicit_count.to_string())?;
    scalar(
        &mut w,
        "exception_unique_fraction",
        format!("{:.6}", stats.exception_unique_fraction),
    )?;
    scalar(
        &mut w,
        "comment_coverage.none",
        stats.comment_coverage.none.to_string(),
    )?;
    scalar(
        &mut w,
        "comment_coverage.above_only",
        stats.comment_coverage.above_only.to_string(),
    )?;
    scalar(
        &mut w,
        "comment_coverage.within_only",
        stats.comment_coverage.within_only.to_string(),
    )?;
    scalar(
        &mut w,
        "comment_coverage.both",
        stats.comment_coverage.both.to_string(),
    )?;
    for (k, v) in &stats.line_count_histogram {
        scalar(&mut w, &format!("line_count_histogram.{k}"), v.to_string())?;
    }
    for (k, v) in &stats.param_count_histogram {
        scalar(&mut w, &format!("param_count_histogram.{k}"), v.to_string())?;
    }
    for dup in &stats.duplicates {
        scalar(&mut w, &format!("duplicates.{}", dup.text), dup.count.to_string())?;
    }
    for skipped in &stats.skipped {
        scalar(
            &mut w,
            &format!("skipped.{}", skipped.path),
            skipped.reason.clone(),
        )?;
    }
    w.flush()
}

fn io_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}
