//! Table assembly and rendering.
//!
//! Markdown renders use fixed precision so they can be compared byte for
//! byte; CSV and JSON keep full precision and parse back to equal values.

mod catalog;
mod tables;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::indicators::IndicatorError;
use crate::stats::CompareError;

pub use catalog::{render_all, RenderedTable};
pub use tables::{
    build_comparison_table, build_rank_table, comparison_table_in, rank_table_in, CaseTable,
    ComparisonTable, EdgeTable, Metric, MultidiscTable, RankRow, RankTable,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("unknown metric {0:?} (expected count, pct_all, pct_coauth or per_researcher)")]
    UnknownMetric(String),
    #[error("unknown format {0:?} (expected csv, json or md)")]
    UnknownFormat(String),
    #[error("the table cutoff must be at least 1")]
    InvalidTopK,
    #[error(transparent)]
    Compare(#[from] CompareError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Csv,
    Json,
    Md,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Md => "md",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            other => Err(ReportError::UnknownFormat(other.to_string())),
        }
    }
}

/// A table that can be written in every output format. All outputs end
/// with a single LF.
pub trait Render {
    fn to_csv(&self) -> String;
    fn to_json(&self) -> String;
    fn to_markdown(&self) -> String;
}

pub fn render<T: Render + ?Sized>(table: &T, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Md => table.to_markdown(),
    }
}

/// Fixed-point with `digits` decimals; never prints a negative zero.
pub(crate) fn fixed(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub(crate) fn p_value(p: f64) -> String {
    if p < 1e-3 {
        format!("{p:.3e}")
    } else {
        fixed(p, 4)
    }
}

/// Shortest text that parses back to the same float.
pub(crate) fn full(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn full_opt(x: Option<f64>) -> String {
    x.map(full).unwrap_or_default()
}

pub(crate) fn json_pretty<T: serde::Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("tables serialize to JSON");
    s.push('\n');
    s
}

pub(crate) fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("write to Vec");
    for r in rows {
        w.write_record(&r).expect("write to Vec");
    }
    String::from_utf8(w.into_inner().expect("flush Vec")).expect("utf-8")
}

pub(crate) fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub(crate) fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
    out.push_str(&line(
        &header.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
    ));
    out.push_str(&line(
        &header.iter().map(|_| "---".to_string()).collect::<Vec<_>>(),
    ));
    for r in rows {
        out.push_str(&line(&r.iter().map(|c| md_cell(c)).collect::<Vec<_>>()));
    }
    out
}
