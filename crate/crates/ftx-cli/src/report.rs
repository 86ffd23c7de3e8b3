//! Rendering of results as JSON, CSV and aligned text.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::Result;

pub const TOOL: &str = "ftx";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn full(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn display(&self) -> String {
        match self {
            Cell::Float(v) if *v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) => format!("{v:.3e}"),
            Cell::Float(v) => format!("{v:.4}"),
            Cell::Empty => "-".into(),
            c => c.full(),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// A flat table, the shared shape of CSV and text output.
#[derive(Clone, Debug, Default)]
pub struct Sheet {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# key: value` lines written above the header.
    pub notes: Vec<String>,
}

impl Sheet {
    pub fn new(headers: &[&str]) -> Self {
        Sheet { headers: headers.iter().map(|h| h.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(std::io::Error::from)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::full)).map_err(std::io::Error::from)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::display).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| cells.iter().map(|r| r[i].len()).chain([self.headers[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |row: &[String]| {
            row.iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1)));
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// Everything one output file needs: a JSON payload and its tabular view.
pub struct Artifact {
    pub stem: String,
    pub json: Value,
    pub sheet: Sheet,
}

impl Artifact {
    pub fn new(stem: impl Into<String>, json: impl Serialize, sheet: Sheet) -> Self {
        Artifact { stem: stem.into(), json: serde_json::to_value(json).expect("results serialize"), sheet }
    }
}

/// Output file name and contents for one format.
pub fn render(a: &Artifact, format: Format, command: &str, config: &RunConfig) -> Result<(String, String)> {
    let cfg = serde_json::to_value(config).expect("config serializes");
    let body = match format {
        Format::Json => {
            let doc = json!({
                "tool": TOOL,
                "version": ftx_core::VERSION,
                "command": command,
                "config": cfg,
                "result": a.json,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json output");
            s.push('\n');
            s
        }
        Format::Csv | Format::Table => {
            let mut s = format!("# {TOOL} {} {command}\n# config: {cfg}\n", ftx_core::VERSION);
            for n in &a.sheet.notes {
                s.push_str(&format!("# {n}\n"));
            }
            s.push_str(&if format == Format::Csv { a.sheet.csv()? } else { a.sheet.table() });
            s
        }
    };
    Ok((format!("{}.{}", a.stem, format.extension()), body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_keeps_full_precision() {
        let mut s = Sheet::new(&["x", "y"]);
        s.push(vec![Cell::from(0.1 + 0.2), Cell::Empty]);
        assert_eq!(s.csv().unwrap(), "x,y\n0.30000000000000004,\n");
    }

    #[test]
    fn table_rounds_and_aligns() {
        let mut s = Sheet::new(&["name", "value"]);
        s.push(vec!["a".into(), 123456.0.into()]);
        s.push(vec!["bb".into(), Cell::Empty]);
        let t = s.table();
        assert!(t.contains("1.235e5"));
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[2], "   a  1.235e5");
        assert_eq!(lines[3], "  bb        -");
    }
}
