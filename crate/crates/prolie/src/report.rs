//! Canonical JSON and plain-text rendering of command results.

use prolie_core::exactlin::{Matrix, Scalar, SparseVector};
use prolie_core::Verdict;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rationals travel as strings; integers print without a denominator.
pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_dense().iter().map(|r| scalars(r)).collect())
}

/// A vector as `{label: coefficient}`.
pub fn vector(v: &SparseVector, labels: &[String]) -> Value {
    let mut out = Map::new();
    for (&i, c) in v.iter() {
        out.insert(labels[i].clone(), scalar(c));
    }
    Value::Object(out)
}

pub fn verdict(v: &Verdict) -> Value {
    let trace: Vec<Value> = v
        .trace
        .iter()
        .map(|(w, dims)| json!({"window": w, "dims": dims}))
        .collect();
    json!({
        "property": v.property,
        "status": v.status.as_str(),
        "depth": v.depth,
        "witness": v.witness,
        "trace": trace,
    })
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_hash: String,
    pub windows: Vec<i64>,
    pub results: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
    /// Properties the command was asked to certify; a failure among them is a
    /// failed run.
    pub required: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input_hash: &str) -> Self {
        Self {
            command: command.into(),
            input_hash: input_hash.into(),
            windows: Vec::new(),
            results: Map::new(),
            verdicts: Vec::new(),
            warnings: Vec::new(),
            required: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn require(&mut self, v: Verdict) {
        self.required.push(v.property.clone());
        self.verdicts.push(v);
    }

    pub fn failed(&self) -> bool {
        self.verdicts
            .iter()
            .any(|v| v.is_fails() && self.required.contains(&v.property))
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "input_hash": self.input_hash,
            "windows": self.windows,
            "results": Value::Object(self.results.clone()),
            "verdicts": self.verdicts.iter().map(verdict).collect::<Vec<_>>(),
            "warnings": self.warnings,
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} (prolie {})\n", self.command, TOOL_VERSION));
        out.push_str(&format!("input {}\n", self.input_hash));
        if !self.windows.is_empty() {
            let w: Vec<String> = self.windows.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!("windows {}\n", w.join(", ")));
        }
        for (k, v) in &self.results {
            render(&mut out, k, v, 0);
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts\n");
            for v in &self.verdicts {
                out.push_str(&format!("  {}: {} (depth {})\n", v.property, v.status.as_str(), v.depth));
                if let Some(w) = &v.witness {
                    out.push_str(&format!("    {w}\n"));
                }
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = a.iter().filter_map(scalar_text).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar_text(v) {
        if s.contains('\n') {
            out.push_str(&format!("{pad}{key}:\n"));
            for line in s.lines() {
                out.push_str(&format!("{pad}  {line}\n"));
            }
        } else {
            out.push_str(&format!("{pad}{key}: {s}\n"));
        }
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render(out, k, x, depth + 1);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                render(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}
