//! Machine-readable experiment tables.
//!
//! JSON schema: {"experiment": …, "params": {…}, "rows": […], "violations":
//! […]} with the field order fixed at construction and floats printed with
//! 17 significant digits, so identical inputs produce byte-identical files.
//! CSV mirrors the rows.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

/// 17 significant digits; deterministic across runs and platforms that
/// implement IEEE 754 doubles.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn value_json(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Float(f) => fmt_float(*f),
        Value::Str(s) => format!("\"{}\"", escape(s)),
        Value::Bool(b) => b.to_string(),
    }
}

fn value_csv(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Float(f) => fmt_float(*f),
        Value::Str(s) => {
            if s.contains(',') || s.contains('"') || s.contains('\n') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Value::Bool(b) => b.to_string(),
    }
}

pub type Row = Vec<(String, Value)>;

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub experiment: String,
    pub params: Vec<(String, Value)>,
    pub rows: Vec<Row>,
    pub violations: Vec<String>,
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Report {
            experiment: experiment.to_string(),
            ..Report::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.push((key.to_string(), value.into()));
        self
    }

    pub fn push_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    /// Record a named check: a violation is appended when `ok` is false.
    pub fn check(&mut self, name: &str, ok: bool, detail: &str) {
        self.push_row(vec![
            ("check".to_string(), Value::Str(name.to_string())),
            ("pass".to_string(), Value::Bool(ok)),
            ("detail".to_string(), Value::Str(detail.to_string())),
        ]);
        if !ok {
            self.violations.push(format!("{name}: {detail}"));
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"experiment\": \"{}\",", escape(&self.experiment));
        out.push_str("  \"params\": {");
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{}\": {}", escape(k), value_json(v));
        }
        out.push_str("},\n");
        out.push_str("  \"rows\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str("    {");
            for (j, (k, v)) in row.iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{}\": {}", escape(k), value_json(v));
            }
            out.push('}');
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ],\n");
        out.push_str("  \"violations\": [");
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{}\"", escape(v));
        }
        out.push_str("]\n}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.rows.first() {
            let header: Vec<String> = first.iter().map(|(k, _)| k.clone()).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in &self.rows {
                let cells: Vec<String> = row.iter().map(|(_, v)| value_csv(v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        out
    }

    /// The one-line console summary.
    pub fn summary(&self) -> String {
        format!(
            "{}: rows={} violations={}",
            self.experiment,
            self.rows.len(),
            self.violations.len()
        )
    }
}
