//! Rectangular tables of real values with a fixed CSV contract: comma
//! separator, LF line endings, UTF-8 header row, and shortest
//! round-trip decimal formatting (so re-parsing reproduces every value
//! bit-exactly).

use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        ResultTable { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Index of a named column.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of a named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Serialize to CSV text (LF endings, shortest round-trip decimals).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&format_value(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parse CSV text produced by [`ResultTable::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CliError::Schema("empty CSV".to_string()))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut table = ResultTable { columns, rows: Vec::new() };
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split(',').map(str::parse::<f64>).collect();
            let row = row.map_err(|e| {
                CliError::Schema(format!("bad number on CSV line {}: {e}", lineno + 2))
            })?;
            if row.len() != table.columns.len() {
                return Err(CliError::Schema(format!(
                    "CSV line {} has {} fields, expected {}",
                    lineno + 2,
                    row.len(),
                    table.columns.len()
                )));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

/// Shortest decimal representation that round-trips to the same `f64`.
fn format_value(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let mut t = ResultTable::new(vec!["t", "x", "y"]);
        t.push_row(vec![0.0, 1.0 / 3.0, 1.1547005383792515]);
        t.push_row(vec![0.1, -2.5e-17, f64::NAN]);
        t.push_row(vec![36.27598728468436, 1e300, -0.0]);
        let text = t.to_csv();
        let back = ResultTable::from_csv(&text).unwrap();
        assert_eq!(back.columns(), t.columns());
        for (a, b) in t.rows().iter().flatten().zip(back.rows().iter().flatten()) {
            if a.is_nan() {
                assert!(b.is_nan());
            } else {
                assert_eq!(a.to_bits(), b.to_bits(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn csv_uses_lf_and_comma() {
        let mut t = ResultTable::new(vec!["a", "b"]);
        t.push_row(vec![1.0, 2.0]);
        assert_eq!(t.to_csv(), "a,b\n1,2\n");
    }

    #[test]
    fn ragged_csv_rejected() {
        assert!(ResultTable::from_csv("a,b\n1,2,3\n").is_err());
        assert!(ResultTable::from_csv("a,b\n1,zzz\n").is_err());
    }

    #[test]
    fn column_lookup() {
        let mut t = ResultTable::new(vec!["t", "pt"]);
        t.push_row(vec![0.0, 1.0]);
        t.push_row(vec![0.5, 1.2]);
        assert_eq!(t.column("pt").unwrap(), vec![1.0, 1.2]);
        assert!(t.column("missing").is_none());
    }
}
