//! CSV and JSON emission. Floats are written with 17 significant digits in
//! scientific notation (`{:.16e}`), which round-trips every `f64` exactly.

use std::collections::BTreeMap;

use serde_json::{json, Value};

/// 17 significant digits, '.' separator, no locale dependence.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    /// JSON has no NaN/Inf; those become null.
    fn json(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_num(*x),
            Cell::Num(_) => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => Value::String(s.clone()).to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"meta": {...}, "columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self, meta: &BTreeMap<&'static str, String>) -> String {
        let meta = json!(meta).to_string();
        let columns = json!(self.columns).to_string();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(Cell::json).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!(
            "{{\"meta\":{meta},\"columns\":{columns},\"rows\":[{}]}}\n",
            rows.join(",\n")
        )
    }
}

/// Parse a CSV produced by [`Table::to_csv`] back into header and raw fields.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}
