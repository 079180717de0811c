//! Record emission: JSON lines as the primary format, CSV as a flat
//! projection of the same rows.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

/// Collects rows and writes them all at once in deterministic order.
pub struct Emitter {
    format: Format,
    out: Option<PathBuf>,
    rows: Vec<Value>,
}

impl Emitter {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Emitter {
            format,
            out,
            rows: Vec::new(),
        }
    }

    pub fn push<T: serde::Serialize>(&mut self, record: &T) {
        let value = serde_json::to_value(record).expect("records are plain data");
        self.rows.push(value);
    }

    pub fn finish(self) -> io::Result<()> {
        let mut sink: Box<dyn Write> = match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        match self.format {
            Format::Json => {
                for row in &self.rows {
                    writeln!(sink, "{row}")?;
                }
            }
            Format::Csv => {
                let flat: Vec<Vec<(String, Value)>> =
                    self.rows.iter().map(|r| flatten(r)).collect();
                let mut columns: Vec<String> = Vec::new();
                for row in &flat {
                    for (key, _) in row {
                        if !columns.contains(key) {
                            columns.push(key.clone());
                        }
                    }
                }
                writeln!(sink, "{}", columns.join(","))?;
                for row in &flat {
                    let cells: Vec<String> = columns
                        .iter()
                        .map(|col| {
                            row.iter()
                                .find(|(k, _)| k == col)
                                .map(|(_, v)| render_cell(v))
                                .unwrap_or_default()
                        })
                        .collect();
                    writeln!(sink, "{}", cells.join(","))?;
                }
            }
        }
        sink.flush()
    }
}

fn flatten(value: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    match value {
        Value::Object(map) => {
            for (key, inner) in map {
                match inner {
                    Value::Object(_) => {
                        for (sub, v) in flatten(inner) {
                            out.push((format!("{key}.{sub}"), v));
                        }
                    }
                    other => out.push((key.clone(), other.clone())),
                }
            }
        }
        other => out.push(("value".into(), other.clone())),
    }
    out
}

/// CSV cell rendering; floats get 12 significant digits.
fn render_cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    return significant_digits(f, 12);
                }
            }
            n.to_string()
        }
        Value::String(s) => {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        other => format!("\"{}\"", other.to_string().replace('"', "\"\"")),
    }
}

pub fn significant_digits(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
