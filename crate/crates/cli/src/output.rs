//! CSV and JSON rendering with an embedded configuration header.

use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;
use crate::run::{Cell, Table};

pub const TOOL: &str = "cvtele";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const CONFIG_PREFIX: &str = "# config: ";

/// 17 significant digits, enough to round-trip any `f64`.
fn format_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_num(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Int(v) => json!(v),
        Cell::Text(s) => json!(s),
        Cell::Empty => Value::Null,
    }
}

pub fn render(cfg: &ExperimentConfig, table: &Table) -> Result<String, CliError> {
    let config = serde_json::to_string(cfg).map_err(|e| CliError::Embedded(e.to_string()))?;
    match cfg.format {
        Format::Csv => {
            let mut out = format!("# {TOOL} {VERSION}\n{CONFIG_PREFIX}{config}\n");
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(json_cell).collect()))
                .collect();
            let doc = json!({
                "meta": { "tool": TOOL, "version": VERSION, "config": serde_json::to_value(cfg).map_err(|e| CliError::Embedded(e.to_string()))? },
                "columns": table.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::Embedded(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Recovers the configuration embedded in a file written by [`render`].
pub fn read_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let bad = |e: serde_json::Error| CliError::Embedded(e.to_string());
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(bad)?;
        let cfg = doc
            .pointer("/meta/config")
            .cloned()
            .ok_or_else(|| CliError::Embedded("no meta.config field".into()))?;
        return serde_json::from_value(cfg).map_err(bad);
    }
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(CONFIG_PREFIX))
        .ok_or_else(|| CliError::Embedded("no config header line".into()))?;
    serde_json::from_str(line).map_err(bad)
}

/// Numeric body of a rendered file: everything after the metadata.
pub fn payload(text: &str) -> String {
    if text.trim_start().starts_with('{') {
        serde_json::from_str::<Value>(text)
            .ok()
            .and_then(|d| d.get("rows").map(|r| r.to_string()))
            .unwrap_or_default()
    } else {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
