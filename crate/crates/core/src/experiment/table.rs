//! In-memory result tables and their CSV form.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::ExperimentError;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(u64),
    Float(f64),
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl Field {
    pub fn render(&self) -> String {
        match self {
            Field::Text(s) => s.clone(),
            Field::Int(v) => v.to_string(),
            Field::Float(x) => format_float(*x),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Field::Int(v) => Some(*v as f64),
            Field::Float(x) => Some(*x),
            Field::Text(_) => None,
        }
    }
}

/// Rounds to 9 significant digits and prints the shortest form of the
/// rounded value.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("scientific float parses");
    format!("{rounded}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self { name: name.into(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

/// Writes `table` to `path` behind a single `# comment` line.
pub fn emit_csv(table: &Table, path: &Path, comment: &str) -> Result<(), ExperimentError> {
    let io = |e: std::io::Error| ExperimentError::Io { path: path.display().to_string(), message: e.to_string() };
    let csv_err = |e: csv::Error| ExperimentError::Io { path: path.display().to_string(), message: e.to_string() };
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    write!(out, "# {comment}\r\n").map_err(io)?;
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(&mut out);
        w.write_record(&table.columns).map_err(csv_err)?;
        for row in &table.rows {
            w.write_record(row.iter().map(Field::render)).map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
    }
    out.flush().map_err(io)
}
