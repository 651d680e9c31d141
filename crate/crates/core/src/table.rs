//! Deterministic CSV / JSON emission of counting results.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub object: String,
    pub field: String,
    pub method: String,
    pub bound: u64,
    pub count: u64,
    /// Wall time; only emitted when timing output is requested, since it
    /// breaks byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// `(B, count)` rows plus metadata echoing the parameters that produced them.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CountingTable {
    pub meta: BTreeMap<String, String>,
    pub rows: Vec<CountRow>,
}

impl CountingTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: CountRow) {
        self.rows.push(row);
    }

    /// Canonical order: by object token, then method, then bound.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| (&a.object, &a.method, a.bound).cmp(&(&b.object, &b.method, b.bound)));
    }

    /// Counts must be nondecreasing in `B` for a fixed (object, method).
    pub fn is_monotone(&self) -> bool {
        let mut rows: Vec<&CountRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| (&a.object, &a.method, a.bound).cmp(&(&b.object, &b.method, b.bound)));
        rows.windows(2).all(|w| w[0].object != w[1].object || w[0].method != w[1].method || w[0].count <= w[1].count)
    }

    pub fn to_csv(&self) -> Result<String> {
        let timed = self.rows.iter().any(|r| r.elapsed_ms.is_some());
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["object", "field", "method", "bound", "count"];
        if timed {
            header.push("elapsed_ms");
        }
        wtr.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec =
                vec![r.object.clone(), r.field.clone(), r.method.clone(), r.bound.to_string(), r.count.to_string()];
            if timed {
                rec.push(r.elapsed_ms.map(|e| e.to_string()).unwrap_or_default());
            }
            wtr.write_record(&rec).map_err(csv_err)?;
        }
        finish(wtr)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

pub(crate) fn finish(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Generic CSV writer for a header plus string rows.
pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header).map_err(csv_err)?;
    for r in rows {
        wtr.write_record(r).map_err(csv_err)?;
    }
    finish(wtr)
}

/// JSON mirror of a CSV table: `{"meta": {...}, "rows": [{col: value}]}`.
pub fn write_json(meta: &BTreeMap<String, String>, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|r| header.iter().zip(r).map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone()))).collect())
        .collect();
    let doc = serde_json::json!({ "meta": meta, "rows": objs });
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(object: &str, bound: u64, count: u64) -> CountRow {
        CountRow { object: object.into(), field: "q".into(), method: "lattice".into(), bound, count, elapsed_ms: None }
    }

    #[test]
    fn csv_quotes_tokens_with_commas() {
        let mut t = CountingTable::new();
        t.push(row("scroll:1,2", 1, 5));
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "object,field,method,bound,count\n\"scroll:1,2\",q,lattice,1,5\n");
    }

    #[test]
    fn monotonicity_and_order() {
        let mut t = CountingTable::new();
        t.push(row("pn:1", 10, 128));
        t.push(row("pn:1", 1, 4));
        assert!(t.is_monotone());
        t.sort();
        assert_eq!(t.rows[0].bound, 1);
        t.push(row("pn:1", 20, 3));
        assert!(!t.is_monotone());
    }
}
