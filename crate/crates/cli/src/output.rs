use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// One JSON object per line.
    Json,
    /// Flattened scalar fields; nested arrays are joined with `;`.
    Csv,
    /// `key: value` lines, one block per record.
    Text,
}

/// Writes records tagged with the run header.
pub struct Emitter<W: Write> {
    out: W,
    format: Format,
    header: Map<String, Value>,
    csv_columns: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W, format: Format, command: &str, config_sha256: &str, seed: u64) -> Self {
        let mut header = Map::new();
        header.insert("schema".into(), SCHEMA_VERSION.into());
        header.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        header.insert("config_sha256".into(), config_sha256.into());
        header.insert("seed".into(), seed.into());
        header.insert("command".into(), command.into());
        Self { out, format, header, csv_columns: None }
    }

    /// Emit one record; the fields of `body` sit beside the header fields.
    pub fn emit(&mut self, kind: &str, body: impl Serialize) -> std::io::Result<()> {
        let mut record = self.header.clone();
        record.insert("record".into(), kind.into());
        match serde_json::to_value(body).expect("reports serialize") {
            Value::Object(fields) => record.extend(fields),
            other => {
                record.insert("value".into(), other);
            }
        }
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(record)),
            Format::Csv => self.write_csv(&record),
            Format::Text => {
                let mut flat = Vec::new();
                flatten("", &Value::Object(record), &mut flat);
                for (k, v) in flat {
                    writeln!(self.out, "{k}: {v}")?;
                }
                writeln!(self.out)
            }
        }
    }

    fn write_csv(&mut self, record: &Map<String, Value>) -> std::io::Result<()> {
        let mut flat = Vec::new();
        flatten("", &Value::Object(record.clone()), &mut flat);
        let columns: Vec<String> = flat.iter().map(|(k, _)| k.clone()).collect();
        if self.csv_columns.as_ref() != Some(&columns) {
            writeln!(self.out, "{}", columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))?;
            self.csv_columns = Some(columns);
        }
        writeln!(self.out, "{}", flat.iter().map(|(_, v)| csv_field(v)).collect::<Vec<_>>().join(","))
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Dotted keys for nested objects; arrays of scalars become one `;`-joined
/// field, arrays of objects are indexed.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar_text).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        scalar => out.push((prefix.to_string(), scalar_text(scalar))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
