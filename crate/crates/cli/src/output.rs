//! Tabular output as CSV or JSON.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
}

/// 17 significant digits, enough to parse back to the same double.
pub fn render(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => render(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(render(x)), Value::Number)
}

/// A result table plus free-form summary fields.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    /// CSV goes to `out`; summary fields become `# key: value` lines for `notes`.
    pub fn write(
        &self,
        format: Format,
        out: &mut dyn std::io::Write,
        notes: &mut dyn std::io::Write,
    ) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))?;
                }
                w.flush()?;
                for (k, v) in &self.summary {
                    writeln!(notes, "# {k}: {v}")?;
                }
                Ok(())
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect())
                    })
                    .collect();
                let mut doc = self.summary.clone();
                doc.insert("rows".into(), Value::Array(rows));
                serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
                writeln!(out)
            }
        }
    }
}
