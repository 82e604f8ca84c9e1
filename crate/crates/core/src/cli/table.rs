//! Tabular output in CSV or JSON lines, with the full configuration echoed
//! as metadata.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value as Json};
use toml::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

/// Numeric table plus the key-value metadata needed to regenerate it.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub metadata: Vec<(String, Value)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl OutputTable {
    pub fn meta(&self, key: &str) -> Option<&Value> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Parses text written by [`render_table`] in CSV form.
    pub fn from_csv(text: &str) -> Result<OutputTable> {
        let mut metadata = Vec::new();
        let mut header = None;
        let mut rows = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if let Some(entry) = line.strip_prefix("# ") {
                let table: toml::Table = entry
                    .parse()
                    .map_err(|e: toml::de::Error| Error::config("metadata", e.message().to_string()))?;
                let entry = table
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::config("metadata", format!("empty entry `{line}`")))?;
                metadata.push(entry);
            } else if header.is_none() {
                header = Some(line.split(',').map(str::to_string).collect::<Vec<_>>());
            } else {
                let row = line
                    .split(',')
                    .map(|c| c.parse::<f64>().map_err(|_| Error::config("row", format!("`{c}` is not a number"))))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
        }
        let header = header.ok_or_else(|| Error::config("header", "missing header line"))?;
        if let Some(bad) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(Error::config("row", format!("expected {} fields, got {}", header.len(), bad.len())));
        }
        Ok(OutputTable { metadata, header, rows })
    }
}

fn toml_to_json(value: &Value) -> Json {
    match value {
        Value::String(s) => json!(s),
        Value::Integer(i) => json!(i),
        Value::Float(f) => json!(f),
        Value::Boolean(b) => json!(b),
        Value::Array(items) => Json::Array(items.iter().map(toml_to_json).collect()),
        other => json!(other.to_string()),
    }
}

fn number(v: f64) -> Json {
    serde_json::Number::from_f64(v).map_or(Json::Null, Json::Number)
}

/// Writes `table`. Floats use the shortest representation that round-trips.
pub fn render_table(table: &OutputTable, format: OutputFormat, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => {
            for (k, v) in &table.metadata {
                writeln!(out, "# {k} = {v}")?;
            }
            writeln!(out, "{}", table.header.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        OutputFormat::Jsonl => {
            let meta: Map<String, Json> = table.metadata.iter().map(|(k, v)| (k.clone(), toml_to_json(v))).collect();
            writeln!(out, "{}", json!({ "metadata": meta }))?;
            for row in &table.rows {
                let obj: Map<String, Json> = table.header.iter().cloned().zip(row.iter().map(|&v| number(v))).collect();
                writeln!(out, "{}", Json::Object(obj))?;
            }
        }
    }
    Ok(())
}

/// Renders to `path`, or to `stdout` when no path is given.
pub fn emit_table(table: &OutputTable, format: OutputFormat, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(path) => {
            let io_err = |source| Error::Io { path: path.to_path_buf(), source };
            let file = File::create(path).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            render_table(table, format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => render_table(table, format, stdout).map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputTable {
        OutputTable {
            metadata: vec![
                ("command".into(), Value::String("run".into())),
                ("M".into(), Value::Integer(16)),
                ("values".into(), Value::Array(vec![Value::Float(0.1), Value::Float(2.0)])),
            ],
            header: vec!["x".into(), "y".into()],
            rows: vec![vec![0.1, 1.0 / 3.0], vec![1e-300, 12345.678901234567]],
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut buf = Vec::new();
        render_table(&sample(), OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# command = \"run\"\n# M = 16\n"));
        assert_eq!(OutputTable::from_csv(&text).unwrap(), sample());
    }

    #[test]
    fn jsonl_has_metadata_then_rows() {
        let mut buf = Vec::new();
        render_table(&sample(), OutputFormat::Jsonl, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<Json> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0]["metadata"]["M"], json!(16));
        assert_eq!(lines[2]["y"].as_f64().unwrap(), 12345.678901234567);
    }

    #[test]
    fn unwritable_path_reports_path() {
        let err = emit_table(&sample(), OutputFormat::Csv, Some(Path::new("/nonexistent/dir/out.csv")), &mut Vec::new())
            .unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }
}
