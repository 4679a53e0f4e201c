//! Minimal CSV emission: a versioned `#` comment line, a header, then rows.
//! Floats use the shortest round-trip representation.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CsvTable {
    kind: &'static str,
    columns: &'static [&'static str],
    rows: Vec<Vec<f64>>,
}

pub const FORMAT_VERSION: u32 = 1;

impl CsvTable {
    pub fn new(kind: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            kind,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# liqlimit {} v{FORMAT_VERSION}", self.kind);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        let text = self.render();
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_header_and_rows() {
        let mut t = CsvTable::new("demo", &["a", "b"]);
        t.push(vec![0.1, -2.0]);
        assert_eq!(t.render(), "# liqlimit demo v1\na,b\n0.1,-2\n");
    }
}
