//! Tables and their CSV and JSON forms.

use crate::config::{Emit, RunConfig, HEADER_PREFIX};
use crate::CliError;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// A vector, written as a JSON array.
    Vec(Vec<f64>),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

impl From<Vec<f64>> for Cell {
    fn from(v: Vec<f64>) -> Self {
        Cell::Vec(v)
    }
}

impl From<&[f64]> for Cell {
    fn from(v: &[f64]) -> Self {
        Cell::Vec(v.to_vec())
    }
}

/// Shortest decimal that parses back to the same `f64`. Rust's `Debug`
/// already prints that, switching to exponent form far from 1.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:?}")
    }
}

impl Cell {
    fn to_field(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Vec(v) => format!("[{}]", v.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(",")),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        let num = |v: f64| serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number);
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Vec(v) => Value::Array(v.iter().map(|x| num(*x)).collect()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the columns");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self, config: &RunConfig) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        out.extend_from_slice(HEADER_PREFIX.as_bytes());
        out.extend_from_slice(serde_json::to_string(config)?.as_bytes());
        out.push(b'\n');
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_field))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    pub fn to_json(&self, config: &RunConfig) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("config".into(), serde_json::to_value(config)?);
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, config: &RunConfig) -> Result<Vec<u8>, CliError> {
        match config.emit {
            Emit::Csv => self.to_csv(config),
            Emit::Json => self.to_json(config),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, 2.0f64.sqrt(), f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(format_float(0.15), "0.15");
        assert_eq!(format_float(1.0), "1.0");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_shape() {
        let mut t = Table::new(&["beta", "opt", "note"]);
        t.push(vec![0.5.into(), vec![1.0, 0.25].into(), "a,b".into()]);
        let text = String::from_utf8(t.to_csv(&RunConfig::default()).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with(HEADER_PREFIX));
        assert_eq!(lines[1], "beta,opt,note");
        assert_eq!(lines[2], "0.5,\"[1.0,0.25]\",\"a,b\"");
    }

    #[test]
    fn json_mirrors_csv() {
        let mut t = Table::new(&["beta", "gap"]);
        t.push(vec![0.5.into(), f64::NAN.into()]);
        let v: Value = serde_json::from_slice(&t.to_json(&RunConfig::default()).unwrap()).unwrap();
        assert_eq!(v["columns"], serde_json::json!(["beta", "gap"]));
        assert_eq!(v["rows"][0]["beta"], 0.5);
        assert!(v["rows"][0]["gap"].is_null());
    }
}
