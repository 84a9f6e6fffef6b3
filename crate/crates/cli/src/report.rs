use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    /// SHA-256 of the canonical JSON of `{command, parameters}`.
    pub input_digest: String,
    pub parameters: Value,
    pub records: Vec<Value>,
    pub summary: Value,
    pub passed: bool,
}

/// A finished command: the report and whether every check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub passed: bool,
}

pub fn input_digest(command: &str, parameters: &Value) -> String {
    // serde_json maps are ordered by key, so this serialization is canonical
    let canonical = serde_json::to_string(&json!({ "command": command, "parameters": parameters }))
        .expect("JSON values serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn now() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunReport {
    /// Records are sorted by their canonical serialization.
    pub fn new(command: &str, parameters: Value, records: Vec<Value>, summary: Value, passed: bool) -> Self {
        let mut keyed: Vec<(String, Value)> =
            records.into_iter().map(|r| (serde_json::to_string(&r).expect("serializable"), r)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: now(),
            input_digest: input_digest(command, &parameters),
            parameters,
            records: keyed.into_iter().map(|(_, r)| r).collect(),
            summary,
            passed,
        }
    }

    pub fn into_outcome(self) -> Outcome {
        let passed = self.passed;
        Outcome { report: self, passed }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The records alone, the part that must be byte-identical across runs.
    pub fn records_json(&self) -> String {
        serde_json::to_string(&self.records).expect("serializable")
    }
}
