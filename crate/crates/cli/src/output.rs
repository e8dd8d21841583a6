use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::scenario::Format;
use crate::CliError;

/// A command's result in both shapes: rows for CSV and a JSON document.
pub struct Artifact {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Artifact {
    pub fn new(header: Vec<&'static str>, json: Value) -> Self {
        Self {
            header,
            rows: Vec::new(),
            json,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io)?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.to_string()))
            }
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json).map_err(|e| CliError::Io(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

fn io(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Shortest round-trip text; scientific notation outside [1e-4, 1e6).
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if (1e-4..1e6).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
