//! Output assembly: every artifact embeds the fully resolved run
//! configuration (including the seed), so it can be regenerated
//! bit-identically.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::opts::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// CSV document: a `# config = {...}` header line, a column header, rows.
pub fn csv_document(config: &Value, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str("# config = ");
    out.push_str(&config.to_string());
    out.push('\n');
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// JSON document: `{"config": ..., <key>: <payload>}`.
pub fn json_document(config: Value, key: &str, payload: Value) -> String {
    let doc = serde_json::json!({ "config": config, key: payload });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

/// Write to the output path, or stdout when none is given.
pub fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
