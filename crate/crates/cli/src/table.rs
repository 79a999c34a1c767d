use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
    /// Bare space-separated rows, no header or footer.
    Txt,
}

/// Rows of exact fields, all rendered as strings; display-only decimals
/// carry a `~` prefix.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<(String, String)>,
}

impl Table {
    pub fn new(schema: &'static str, columns: &[&'static str]) -> Table {
        Table { schema, columns: columns.to_vec(), ..Table::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn foot(&mut self, key: impl Into<String>, value: impl ToString) {
        self.footer.push((key.into(), value.to_string()));
    }

    /// `config` is echoed so that the output records how to reproduce it.
    pub fn write<W: Write>(&self, out: &mut W, format: Format, config: &[(String, String)]) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "# schema={}", self.schema)?;
                for (k, v) in config {
                    writeln!(out, "# config {k}={v}")?;
                }
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
                for (k, v) in &self.footer {
                    writeln!(out, "# {k}={v}")?;
                }
            }
            Format::Jsonl => {
                let cfg: Map<String, Value> = config.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
                let head = serde_json::json!({ "schema": self.schema, "config": cfg });
                writeln!(out, "{head}")?;
                for row in &self.rows {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), Value::from(v.as_str())))
                        .collect();
                    writeln!(out, "{}", Value::Object(obj))?;
                }
                let foot: Map<String, Value> =
                    self.footer.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
                writeln!(out, "{}", serde_json::json!({ "footer": foot }))?;
            }
            Format::Txt => {
                for row in &self.rows {
                    writeln!(out, "{}", row.join(" "))?;
                }
            }
        }
        Ok(())
    }
}

/// Six significant digits behind a `~`, never in exponent notation.
pub fn approx(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("~{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    if decimals > 0 {
        return format!("~{x:.decimals$}");
    }
    let scale = 10f64.powi(mag - 5);
    format!("~{:.0}", (x / scale).round() * scale)
}
