//! Result documents and their CSV/JSON emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
    /// Seconds since the Unix epoch; excluded from reproducibility comparisons.
    pub timestamp: u64,
    pub summary: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultDocument {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            metadata: Metadata {
                command: command.to_string(),
                parameters: BTreeMap::new(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp,
                summary: BTreeMap::new(),
            },
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                left: self.columns.len(),
                right: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn parameter(&mut self, key: &str, value: impl ToString) {
        self.metadata.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn summary(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.metadata.summary.insert(key.to_string(), value.into());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

/// Shortest text that parses back to exactly `v`; plain notation for
/// moderate magnitudes, exponent notation otherwise.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn render_csv(doc: &ResultDocument) -> String {
    let mut out = doc.columns.join(",");
    out.push('\n');
    for row in &doc.rows {
        let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

pub fn render_json(doc: &ResultDocument) -> Result<String> {
    let mut out = serde_json::to_string_pretty(doc)
        .map_err(|e| Error::Resource(format!("JSON serialization failed: {e}")))?;
    out.push('\n');
    Ok(out)
}

pub fn write_document(doc: &ResultDocument, format: Format, destination: &Destination) -> Result<()> {
    let text = match format {
        Format::Csv => render_csv(doc),
        Format::Json => render_json(doc)?,
    };
    let written = match destination {
        Destination::Stdout => {
            let mut lock = std::io::stdout().lock();
            lock.write_all(text.as_bytes()).and_then(|_| lock.flush())
        }
        Destination::File(path) => std::fs::write(path, text.as_bytes()),
    };
    written.map_err(|e| Error::Resource(format!("write failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for &v in &[0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 3.2e-17, 9.888e-3, 1e-4, 9.99e-5, 1e16, 2.5e300, -7.25] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_number(0.25), "0.25");
        assert_eq!(format_number(3.2e-17), "3.2e-17");
        assert_eq!(format_number(4.0), "4");
    }

    #[test]
    fn empty_csv_is_header_only() {
        let doc = ResultDocument::new("curve", &["t", "p"]);
        assert_eq!(render_csv(&doc), "t,p\n");
    }

    #[test]
    fn csv_rows() {
        let mut doc = ResultDocument::new("curve", &["t", "p"]);
        doc.push_row(vec![0.5, 1e-20]).unwrap();
        assert!(doc.push_row(vec![1.0]).is_err());
        assert_eq!(render_csv(&doc), "t,p\n0.5,1e-20\n");
    }

    #[test]
    fn json_shape() {
        let mut doc = ResultDocument::new("table1", &["x"]);
        doc.parameter("gamma", 1.1);
        doc.summary("rows", 1);
        doc.push_row(vec![0.8]).unwrap();
        let text = render_json(&doc).unwrap();
        assert!(text.ends_with('\n'));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metadata"]["command"], "table1");
        assert_eq!(v["metadata"]["parameters"]["gamma"], "1.1");
        assert_eq!(v["rows"][0][0], 0.8);
        assert_eq!(v["columns"][0], "x");
    }

    #[test]
    fn unwritable_destination() {
        let doc = ResultDocument::new("curve", &["t"]);
        let dest = Destination::File(PathBuf::from("/nonexistent-dir/out.csv"));
        assert!(matches!(write_document(&doc, Format::Csv, &dest), Err(Error::Resource(_))));
    }
}
