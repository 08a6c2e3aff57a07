//! CSV tables and versioned JSON documents.

use std::io::Write;

use serde_json::{Map, Value};

/// Bumped whenever a JSON key is renamed or removed.
pub const SCHEMA_VERSION: u64 = 1;

/// A CSV table with a required header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wtr.write_record(&self.header)?;
        for r in &self.rows {
            wtr.write_record(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Top-level document: `command`, `schema_version` and the given fields.
/// `serde_json::Map` is ordered by key, so output keys are always sorted.
pub fn document(command: &str, fields: Map<String, Value>) -> Value {
    let mut doc = fields;
    doc.insert("command".into(), Value::from(command));
    doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    Value::Object(doc)
}

pub fn write_json<W: Write>(doc: &Value, mut w: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)
}
