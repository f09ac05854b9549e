//! Output rendering shared by the subcommands: CSV (RFC-4180 with header
//! row), JSON (stable field order, full round-trip precision), and aligned
//! plain-text tables. Everything is assembled as a string first and written
//! in one ordered pass.

use crate::CliError;
use clap::ValueEnum;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Config(e.to_string()))
}

pub fn to_json<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut text =
        serde_json::to_string_pretty(rows).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Aligned table with one column per serialized field. Field order follows
/// the struct declaration (serde_json is built with `preserve_order`).
pub fn to_table<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let values: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|r| {
            match serde_json::to_value(r) {
                Ok(serde_json::Value::Object(map)) => Ok(map),
                Ok(_) => Err(CliError::Config("table output needs record rows".into())),
                Err(e) => Err(CliError::Config(e.to_string())),
            }
        })
        .collect::<Result<_, _>>()?;
    let Some(first) = values.first() else {
        return Ok(String::new());
    };
    let headers: Vec<&String> = first.keys().collect();
    let render = |v: &serde_json::Value| -> String {
        match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Null => "-".into(),
            other => other.to_string(),
        }
    };
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    let mut cells = Vec::with_capacity(values.len());
    for row in &values {
        let rendered: Vec<String> = headers
            .iter()
            .map(|&h| row.get(h).map(&render).unwrap_or_else(|| "-".into()))
            .collect();
        for (w, c) in widths.iter_mut().zip(&rendered) {
            *w = (*w).max(c.len());
        }
        cells.push(rendered);
    }
    let mut out = String::new();
    for (i, h) in headers.iter().enumerate() {
        out.push_str(&format!("{:<w$}  ", h, w = widths[i]));
    }
    out.push('\n');
    for rendered in &cells {
        for (i, c) in rendered.iter().enumerate() {
            out.push_str(&format!("{:<w$}  ", c, w = widths[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
        Format::Table => to_table(rows),
    }
}

/// Writes to the given path, or stdout when absent.
pub fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}
