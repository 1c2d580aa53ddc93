//! Rectangular result tables and their two encodings.
//!
//! Every subcommand produces one table.  CSV prints floats with 17
//! significant digits so readers can parse the exact bit pattern back;
//! JSON goes through the shortest round-tripping decimal form.  Both
//! encodings are byte-stable for identical inputs.

use std::error::Error;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell.  `Null` renders as an empty CSV field and JSON null.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
}

#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "ragged table row");
        self.rows.push(row);
    }

    pub fn emit(&self, format: Format, output: Option<&Path>) -> Result<(), Box<dyn Error>> {
        let bytes = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json(),
        };
        match output {
            Some(path) => fs::write(path, &bytes)
                .map_err(|e| format!("writing {}: {e}", path.display()))?,
            None => io::stdout()
                .write_all(&bytes)
                .map_err(|e| format!("writing standard output: {e}"))?,
        }
        Ok(())
    }

    fn to_csv(&self) -> Result<Vec<u8>, Box<dyn Error>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(render_csv))?;
        }
        Ok(w.into_inner()?)
    }

    fn to_json(&self) -> Vec<u8> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = serde_json::Map::new();
                for (key, cell) in self.headers.iter().zip(row) {
                    object.insert((*key).to_string(), json_value(cell));
                }
                serde_json::Value::Object(object)
            })
            .collect();
        let mut bytes = serde_json::to_vec_pretty(&serde_json::Value::Array(rows))
            .expect("tables hold only plain values");
        bytes.push(b'\n');
        bytes
    }
}

fn render_csv(cell: &Cell) -> String {
    match cell {
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) => format!("{v:.16e}"),
        Cell::Str(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
    }
}

fn json_value(cell: &Cell) -> serde_json::Value {
    match cell {
        Cell::UInt(v) => (*v).into(),
        Cell::Float(v) => serde_json::Number::from_f64(*v)
            .map_or(serde_json::Value::Null, serde_json::Value::Number),
        Cell::Str(s) => serde_json::Value::String(s.clone()),
        Cell::Bool(b) => serde_json::Value::Bool(*b),
        Cell::Null => serde_json::Value::Null,
    }
}
