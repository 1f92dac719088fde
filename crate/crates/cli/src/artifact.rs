//! One table per run, rendered as CSV or JSON with identical content.

use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

const CONFIG_PREFIX: &str = "# config: ";
const RESULT_PREFIX: &str = "# result: ";

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Verdicts and descriptors; `Null` when the table says it all.
    pub result: Value,
}

impl Artifact {
    pub fn new(columns: &[&str]) -> Self {
        Artifact {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, config: &RunConfig) -> CliResult<String> {
        match config.common.format {
            Format::Csv => self.render_csv(config),
            Format::Json => {
                let doc = json!({
                    "config": serde_json::to_value(config)?,
                    "result": self.result,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
        }
    }

    fn render_csv(&self, config: &RunConfig) -> CliResult<String> {
        let mut out = format!("{CONFIG_PREFIX}{}\n", config.to_canonical());
        if !self.result.is_null() {
            out.push_str(&format!("{RESULT_PREFIX}{}\n", self.result));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv of utf-8 strings"));
        Ok(out)
    }

    /// Reads back an artifact in either format.
    pub fn parse(text: &str) -> CliResult<(RunConfig, Artifact)> {
        if text.starts_with(CONFIG_PREFIX) {
            Self::parse_csv(text)
        } else {
            let doc: Value = serde_json::from_str(text)?;
            let config = serde_json::from_value(doc["config"].clone())?;
            let strings = |v: &Value| -> CliResult<Vec<String>> {
                Ok(serde_json::from_value(v.clone())?)
            };
            let columns = strings(&doc["columns"])?;
            let rows = doc["rows"]
                .as_array()
                .ok_or_else(|| CliError::usage("artifact has no rows"))?
                .iter()
                .map(strings)
                .collect::<CliResult<_>>()?;
            Ok((config, Artifact { columns, rows, result: doc["result"].clone() }))
        }
    }

    fn parse_csv(text: &str) -> CliResult<(RunConfig, Artifact)> {
        let mut lines = text.lines();
        let first = lines.next().unwrap_or_default();
        let config: RunConfig = serde_json::from_str(&first[CONFIG_PREFIX.len()..])?;
        let mut rest = text[first.len()..].trim_start_matches('\n');
        let mut result = Value::Null;
        if let Some(r) = rest.strip_prefix(RESULT_PREFIX) {
            let end = r.find('\n').unwrap_or(r.len());
            result = serde_json::from_str(&r[..end])?;
            rest = r[end..].trim_start_matches('\n');
        }
        let mut reader = csv::Reader::from_reader(rest.as_bytes());
        let columns = reader.headers()?.iter().map(String::from).collect();
        let rows = reader
            .records()
            .map(|r| Ok(r?.iter().map(String::from).collect()))
            .collect::<CliResult<_>>()?;
        Ok((config, Artifact { columns, rows, result }))
    }
}
