//! Tables and their CSV / JSON renderings.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Real(v) => s.serialize_f64(*v),
            Cell::Text(v) => s.serialize_str(v),
            Cell::Empty => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Rows as objects with keys in column order.
struct Records<'a>(&'a Table);

struct Record<'a>(&'a [String], &'a [Cell]);

impl Serialize for Records<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Record(&self.0.columns, row))?;
        }
        seq.end()
    }
}

impl Serialize for Record<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn csv_field(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Real(v) => sig12(*v),
        Cell::Text(v) if v.contains([',', '"', '\n']) => format!("\"{}\"", v.replace('"', "\"\"")),
        Cell::Text(v) => v.clone(),
        Cell::Empty => String::new(),
    }
}

/// Fixed-point decimal with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// What a command produced: a table plus a free-form summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: Value,
    /// Set by `compare` when a requested threshold was missed.
    pub threshold_failure: Option<String>,
}

impl Report {
    pub fn new(table: Table, summary: Value) -> Self {
        Report {
            table,
            summary,
            threshold_failure: None,
        }
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut text =
                    serde_json::to_string_pretty(&self.envelope(cfg)).expect("report serializes");
                text.push('\n');
                text
            }
        }
    }

    fn envelope(&self, cfg: &RunConfig) -> Value {
        json!({
            "config": cfg,
            "summary": self.summary,
            "columns": self.table.columns,
            "data": serde_json::to_value(Records(&self.table)).expect("table serializes"),
            "provenance": {
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "seed": cfg.seed,
                "rng": degchain_core::RNG_ID,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.4), "0.400000000000");
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(1234.5), "1234.50000000");
        assert_eq!(sig12(-2.5e-5), "-0.0000250000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1e13), "10000000000000");
    }

    #[test]
    fn csv_quotes_text() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![Cell::from("x,y"), Cell::Empty]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",\n");
    }

    #[test]
    fn records_keep_column_order() {
        let mut t = Table::new(["z", "a"]);
        t.push(vec![1u64.into(), 0.5.into()]);
        let text = serde_json::to_string(&Records(&t)).unwrap();
        assert_eq!(text, r#"[{"z":1,"a":0.5}]"#);
    }
}
