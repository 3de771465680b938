//! Frozen tabular output.
//!
//! CSV layout (schema `cyclewalk-table/1`):
//!
//! ```text
//! # schema: cyclewalk-table/1
//! # tool: cyclewalk <version>
//! # command: <name>
//! # config: <effective config as one-line JSON>
//! <header row>
//! <data rows>
//! # summary: <key>=<value>        (zero or more)
//! ```
//!
//! Floats are written in scientific notation with 17 significant digits.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "cyclewalk-table/1";
pub const TOOL: &str = concat!("cyclewalk ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => u8::from(*v).to_string(),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
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

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: String,
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(command: &str, config: Value, columns: Vec<&'static str>) -> Self {
        Self {
            command: command.to_string(),
            config,
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# schema: {SCHEMA}")?;
        writeln!(out, "# tool: {TOOL}")?;
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# config: {}", self.config)?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        for (key, value) in &self.summary {
            writeln!(out, "# summary: {key}={}", value.csv())?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.to_string(), v.json()))
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "tool": TOOL,
            "command": self.command,
            "config": self.config,
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(f64::NAN), "NaN");
        let s = format_float(1.0 / 3.0);
        let mantissa = s.split('e').next().unwrap().replace('.', "");
        assert_eq!(mantissa.len(), 17);
        assert_eq!(s.parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("evolve", json!({"d": 2}), vec!["n", "probability", "note"]);
        t.push(vec![0usize.into(), 0.25.into(), "a,b".into()]);
        t.push(vec![1usize.into(), 0.75.into(), true.into()]);
        t.summarize("total", 1.0);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# schema: cyclewalk-table/1");
        assert_eq!(lines[3], "# config: {\"d\":2}");
        assert_eq!(lines[4], "n,probability,note");
        assert_eq!(lines[5], "0,2.5000000000000000e-1,\"a,b\"");
        assert_eq!(lines[6], "1,7.5000000000000000e-1,1");
        assert_eq!(lines[7], "# summary: total=1.0000000000000000e0");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new("mixing", json!({}), vec!["T", "sd"]);
        t.push(vec![4u64.into(), f64::NAN.into()]);
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["rows"][0]["T"], 4);
        assert!(v["rows"][0]["sd"].is_null());
    }
}
