use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ruled_core::table::{write_csv, write_json};
use ruled_core::Error;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ZERO: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;
pub const EXIT_MISMATCH: u8 = 5;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ZeroVector | Error::ZeroElement => EXIT_ZERO,
        Error::ResourceLimit { .. } | Error::Overflow(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A header plus string rows, rendered as CSV or as the JSON mirror.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, meta: &BTreeMap<String, String>, format: Format) -> Result<String, Error> {
        let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
        match format {
            Format::Csv => write_csv(&header, &self.rows),
            Format::Json => write_json(meta, &header, &self.rows).map(|s| s + "\n"),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes `text` to `out` and a reproducibility manifest next to it.
pub fn persist(out: &Path, text: &str, manifest: &serde_json::Value) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("cannot write {}: {e}", out.display()));
    fs::write(out, text).map_err(io)?;
    let body = serde_json::to_string_pretty(manifest).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(manifest_path(out), body + "\n").map_err(io)
}

pub fn manifest(
    command: &str,
    meta: &BTreeMap<String, String>,
    summary: &[(String, String)],
    status: &str,
) -> serde_json::Value {
    let summary: serde_json::Map<String, serde_json::Value> =
        summary.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
    serde_json::json!({
        "tool": "ruled",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": meta,
        "summary": summary,
        "status": status,
    })
}
