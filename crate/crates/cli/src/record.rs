//! Run records and the determinism audit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: String,
    pub experiment: String,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: String,
    pub input_digest: String,
    pub outcome: BTreeMap<String, Value>,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the document with insignificant whitespace removed and
/// object keys sorted. Numbers keep their source spelling.
pub fn input_digest(document: &str) -> Result<String, serde_json::Error> {
    let value: Value = serde_json::from_str(document)?;
    let mut canonical = String::new();
    write_canonical(&value, &mut canonical);
    Ok(sha256_hex(canonical.as_bytes()))
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CompareError {
    #[error("records describe different scenarios (digest {a} vs {b})")]
    DigestMismatch { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Difference {
    pub field: String,
    pub a: Value,
    pub b: Value,
}

/// Fieldwise diff of two records of the same scenario. Timestamps are not
/// compared.
pub fn compare_runs(a: &RunRecord, b: &RunRecord) -> Result<Vec<Difference>, CompareError> {
    if a.input_digest != b.input_digest {
        return Err(CompareError::DigestMismatch {
            a: a.input_digest.clone(),
            b: b.input_digest.clone(),
        });
    }
    let mut diffs = Vec::new();
    let mut push = |field: String, x: Value, y: Value| {
        if x != y {
            diffs.push(Difference { field, a: x, b: y });
        }
    };
    push(
        "tool_version".into(),
        a.tool_version.clone().into(),
        b.tool_version.clone().into(),
    );
    push("scenario".into(), a.scenario.clone().into(), b.scenario.clone().into());
    let keys: std::collections::BTreeSet<&String> = a.outcome.keys().chain(b.outcome.keys()).collect();
    for k in keys {
        let x = a.outcome.get(k).cloned().unwrap_or(Value::Null);
        let y = b.outcome.get(k).cloned().unwrap_or(Value::Null);
        push(format!("outcome.{k}"), x, y);
    }
    let files = |r: &RunRecord| -> BTreeMap<String, String> {
        r.outputs.iter().map(|o| (o.name.clone(), o.sha256.clone())).collect()
    };
    let (fa, fb) = (files(a), files(b));
    let names: std::collections::BTreeSet<&String> = fa.keys().chain(fb.keys()).collect();
    for name in names {
        let x = fa.get(name).cloned().map_or(Value::Null, Value::String);
        let y = fb.get(name).cloned().map_or(Value::Null, Value::String);
        push(format!("outputs.{name}"), x, y);
    }
    Ok(diffs)
}
