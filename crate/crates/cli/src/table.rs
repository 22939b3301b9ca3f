//! CSV tables with a per-column number format.
//!
//! Lengths, areas and other magnitudes carry 6 significant digits,
//! probabilities 6 decimals. Parsing a written table and writing it again
//! reproduces the same bytes.

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    /// Six significant digits.
    Sig6,
    /// Six decimal places.
    Prob,
    Int,
    /// Shortest representation that parses back to the same `f64`.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Num(x as f64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Written as a leading `# ...` line.
    pub comment: Option<String>,
    pub columns: Vec<(String, Format)>,
    pub rows: Vec<Vec<Cell>>,
}

fn non_finite(x: f64) -> Option<String> {
    if x.is_nan() {
        Some("NaN".into())
    } else if x.is_infinite() {
        Some(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        None
    }
}

pub fn sig6(x: f64) -> String {
    if let Some(s) = non_finite(x) {
        return s;
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..15).contains(&exp) {
        let rounded: f64 = sci.parse().expect("valid float");
        format!("{:.*}", (5 - exp).max(0) as usize, rounded)
    } else {
        sci
    }
}

pub fn prob6(x: f64) -> String {
    non_finite(x).unwrap_or_else(|| format!("{x:.6}"))
}

fn format_num(x: f64, f: Format) -> String {
    match f {
        Format::Sig6 => sig6(x),
        Format::Prob => prob6(x),
        Format::Int => non_finite(x).unwrap_or_else(|| format!("{x:.0}")),
        Format::Exact | Format::Text => non_finite(x).unwrap_or_else(|| format!("{x}")),
    }
}

impl Table {
    pub fn new(columns: &[(&str, Format)]) -> Self {
        Self {
            comment: None,
            columns: columns.iter().map(|&(n, f)| (n.to_string(), f)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<&str> {
        self.columns.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        if let Some(c) = &self.comment {
            writeln!(out, "# {c}").expect("in-memory write");
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(self.header()).expect("in-memory write");
            for row in &self.rows {
                let fields = row
                    .iter()
                    .zip(&self.columns)
                    .map(|(cell, (_, f))| match cell {
                        Cell::Text(s) => s.clone(),
                        Cell::Num(x) => format_num(*x, *f),
                    });
                w.write_record(fields).expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        String::from_utf8(out).expect("csv output is UTF-8")
    }

    /// Reads a table written by [`Table::to_csv_string`] with the given column
    /// formats.
    pub fn parse(text: &str, formats: &[Format]) -> std::result::Result<Self, String> {
        let (comment, body) = match text.strip_prefix("# ") {
            Some(rest) => {
                let end = rest.find('\n').ok_or("comment line without a header")?;
                (Some(rest[..end].to_string()), &rest[end + 1..])
            }
            None => (None, text),
        };
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let header = r.headers().map_err(|e| e.to_string())?.clone();
        if header.len() != formats.len() {
            return Err(format!(
                "expected {} columns, found {}",
                formats.len(),
                header.len()
            ));
        }
        let columns = header
            .iter()
            .map(String::from)
            .zip(formats.iter().copied())
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            let row = rec
                .iter()
                .zip(formats)
                .map(|(field, f)| match f {
                    Format::Text => Ok(Cell::Text(field.to_string())),
                    _ => field
                        .parse::<f64>()
                        .map(Cell::Num)
                        .map_err(|e| format!("bad number {field:?}: {e}")),
                })
                .collect::<std::result::Result<Vec<_>, String>>()?;
            rows.push(row);
        }
        Ok(Self {
            comment,
            columns,
            rows,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        })
    }
}
