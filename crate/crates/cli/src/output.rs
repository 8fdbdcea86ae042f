//! Rendering of command results as plain text, CSV or JSON.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

/// A table of string cells with a header row.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A command result: always a table, optionally with a terser plain-text form.
pub struct Output {
    pub table: Table,
    pub plain: Option<String>,
}

impl Output {
    pub fn table(table: Table) -> Self {
        Output { table, plain: None }
    }

    pub fn with_plain(table: Table, plain: impl Into<String>) -> Self {
        Output { table, plain: Some(plain.into()) }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => match &self.plain {
                Some(text) => ensure_newline(text.clone()),
                None => {
                    let mut out = self.table.header.join("\t");
                    out.push('\n');
                    for row in &self.table.rows {
                        out.push_str(&row.join("\t"));
                        out.push('\n');
                    }
                    out
                }
            },
            Format::Csv => {
                let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                writer.write_record(&self.table.header).expect("writing to memory");
                for row in &self.table.rows {
                    writer.write_record(row).expect("writing to memory");
                }
                String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("cells are UTF-8")
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .table
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .table
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, v)| (h.clone(), Value::String(v.clone())))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                ensure_newline(serde_json::to_string_pretty(&rows).expect("strings serialize"))
            }
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Shortest round-trip rendering, switching to exponent form for very large or small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
