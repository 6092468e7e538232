//! Column-oriented numeric tables written as CSV.
//!
//! Floats are printed with Rust's shortest round-trip formatting, so equal
//! values always produce identical bytes. Missing values are empty fields.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Float(x) => x.to_string(),
            Value::Int(n) => n.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(x) => Some(*x),
            Value::Int(n) => Some(*n as f64),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Missing, Value::Float)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as u64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric values of a column, `None` where missing.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render)).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV output is UTF-8")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Parses CSV written by [`Table::to_csv`]; numeric fields become
    /// floats, empty fields become missing.
    pub fn parse_csv(text: &str) -> Result<Table> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r
            .headers()
            .map_err(|e| Error::Config(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut table = Table::new(header);
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
            table.push(
                rec.iter()
                    .map(|f| {
                        if f.is_empty() {
                            Value::Missing
                        } else {
                            f.parse::<f64>().map_or_else(|_| Value::Text(f.to_owned()), Value::Float)
                        }
                    })
                    .collect(),
            );
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip() {
        let mut t = Table::new(["x", "y", "note"]);
        t.push(vec![0.1.into(), None.into(), "a".into()]);
        t.push(vec![1e-5.into(), 3u64.into(), "b".into()]);
        let s = t.to_csv();
        assert_eq!(s, "x,y,note\n0.1,,a\n0.00001,3,b\n");
        let back = Table::parse_csv(&s).unwrap();
        assert_eq!(back.column("x").unwrap(), vec![Some(0.1), Some(1e-5)]);
        assert_eq!(back.column("y").unwrap(), vec![None, Some(3.0)]);
    }
}
