//! JSON and CSV rendering. Every report is turned into a `serde_json`
//! value first, so CSV rows are read off the same data the JSON shows.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use ltlab::Error;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A header and its rows.
pub type Table = (Vec<String>, Vec<Vec<String>>);

fn names(keys: &[&str]) -> Vec<String> {
    keys.iter().map(|k| k.to_string()).collect()
}

pub struct Rendered {
    pub ok: bool,
    format: Format,
    value: Value,
    rows: fn(&Value) -> Table,
}

impl Rendered {
    pub fn build<T: Serialize>(format: Format, ok: bool, report: &T, rows: fn(&Value) -> Table) -> ltlab::Result<Self> {
        Ok(Rendered {
            ok,
            format,
            value: serde_json::to_value(report)?,
            rows,
        })
    }

    pub fn text(&self) -> ltlab::Result<String> {
        match self.format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.value)? + "\n"),
            Format::Csv => {
                let (header, rows) = (self.rows)(&self.value);
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(&header).map_err(io)?;
                for r in rows {
                    w.write_record(&r).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
            }
        }
    }
}

/// Scalars as their plain text, strings unquoted, anything else as JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(a) if a.iter().all(|x| x.is_u64()) => {
            a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn pick(v: &Value, keys: &[&str]) -> Vec<String> {
    keys.iter().map(|k| cell(&v[*k])).collect()
}

pub fn count_rows(v: &Value) -> Table {
    let keys = ["q", "h", "n", "count", "method", "seconds"];
    (names(&keys), vec![pick(v, &keys)])
}

/// One row per `lambda`.
pub fn charsum_rows(v: &Value) -> Table {
    let header = names(&["q", "h", "n", "lambda", "primitive", "S"]);
    let head = pick(v, &["q", "h", "n"]);
    let rows = v["records"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|r| {
            let mut row = head.clone();
            row.extend(pick(r, &["lambda", "primitive", "S"]));
            row
        })
        .collect();
    (header, rows)
}

/// One row per `(lambda, n)`.
pub fn conjecture_rows(v: &Value) -> Table {
    let header = names(&["q", "h", "lambda", "primitive", "n", "S", "predicted", "match"]);
    let head = pick(v, &["q", "h"]);
    let mut rows = Vec::new();
    for r in v["per_lambda"].as_array().into_iter().flatten() {
        for (i, s) in r["S"].as_array().into_iter().flatten().enumerate() {
            let mut row = head.clone();
            row.extend(pick(r, &["lambda", "primitive"]));
            row.push((i + 1).to_string());
            row.push(cell(s));
            row.push(cell(&r["predicted"][i]));
            row.push(cell(&r["match"]));
            rows.push(row);
        }
    }
    (header, rows)
}

/// The top-level fields of an object as a single row.
pub fn flat_row(v: &Value) -> Table {
    let Some(obj) = v.as_object() else {
        return (names(&["value"]), vec![vec![cell(v)]]);
    };
    (obj.keys().cloned().collect(), vec![obj.values().map(cell).collect()])
}

pub fn identity_rows(v: &Value) -> Table {
    let header = names(&["q", "h", "identity", "holds", "wall_time_ms"]);
    let head = pick(v, &["q", "h"]);
    let rows = v["identities"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|r| {
            let mut row = head.clone();
            row.extend(pick(r, &["identity", "holds", "wall_time_ms"]));
            row
        })
        .collect();
    (header, rows)
}

/// One row per `(sample, check)`.
pub fn formal_rows(v: &Value) -> Table {
    let header = names(&["sample", "check", "pass", "residual", "exact", "scale", "slack"]);
    let mut rows = Vec::new();
    for s in v["samples"].as_array().into_iter().flatten() {
        for c in s["checks"].as_array().into_iter().flatten() {
            rows.push(vec![
                cell(&s["label"]),
                cell(&c["name"]),
                cell(&c["pass"]),
                cell(&c["residual"]["valuation"]),
                cell(&c["residual"]["exact"]),
                cell(&c["scale"]),
                cell(&c["slack"]),
            ]);
        }
    }
    (header, rows)
}

/// One row per `(sample, congruence, index)`.
pub fn congruence_rows(v: &Value) -> Table {
    let header = names(&["sample", "congruence", "index", "achieved", "exact", "threshold", "pass"]);
    let mut rows = Vec::new();
    for s in v["samples"].as_array().into_iter().flatten() {
        for kind in ["prop41", "eq_w", "yzeta"] {
            for c in s[kind].as_array().into_iter().flatten() {
                rows.push(vec![
                    cell(&s["label"]),
                    kind.to_string(),
                    cell(&c["index"]),
                    cell(&c["achieved"]["valuation"]),
                    cell(&c["achieved"]["exact"]),
                    cell(&c["threshold"]),
                    cell(&c["pass"]),
                ]);
            }
        }
        let y = &s["yprop"];
        rows.push(vec![
            cell(&s["label"]),
            "yprop".into(),
            "0".into(),
            cell(&y["achieved"]["valuation"]),
            cell(&y["achieved"]["exact"]),
            cell(&y["threshold"]),
            cell(&y["pass"]),
        ]);
    }
    (header, rows)
}
