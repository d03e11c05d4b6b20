//! Rendering of reports as JSON or CSV.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command result: the canonical JSON value and its CSV projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: Table,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports are plain JSON values");
                s.push('\n');
                s
            }
            Format::Csv => self.table.render(),
        }
    }
}

/// Shortest round-trip form; empty for non-finite values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        String::new()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Lowercase name of a unit enum variant through its serde form.
pub fn label<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        other => panic!("expected a string label, got {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, -0.1, 1e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(f64::NAN), "");
        assert_eq!(opt(None), "");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["x", "y"]);
        t.push(vec!["1".into(), "2".into()]);
        let r = Report { json: Value::Null, table: t };
        assert_eq!(r.render(Format::Csv), "x,y\n1,2\n");
        assert_eq!(r.render(Format::Json), "null\n");
    }
}
