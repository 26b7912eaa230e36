//! Output documents: a metadata header plus a table of rows.
//!
//! CSV output starts with one `# {json}` header line; JSON output nests the
//! same header next to the rows.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

/// A pass/fail statistical or exact check, evaluated on every run and
/// enforced under `--assert`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub seed_source: &'static str,
    pub oracle: Value,
    pub summary: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// Rows of one command's result, cells as JSON scalars (`null` for empty).
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a command produces before rendering.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    pub oracle: Value,
    pub summary: Value,
    pub checks: Vec<Check>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(header: &Header, table: &Table, format: Format) -> Result<String, CliError> {
    let head = serde_json::to_string(header).map_err(|e| CliError::Numerical(e.to_string()))?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Numerical(e.to_string());
            w.write_record(&table.columns).map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row.iter().map(cell)).map_err(csv_err)?;
            }
            let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?)
                .expect("csv output is utf-8");
            Ok(format!("# {head}\n{body}"))
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Object(table.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect::<Map<_, _>>()))
                .collect();
            let doc = serde_json::json!({ "header": header, "rows": rows });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Numerical(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}
