//! JSON report written to stdout. Keys come out sorted, and nothing in the
//! body depends on time or thread scheduling.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// A file read at startup, kept with its digest.
pub struct Input {
    pub path: String,
    pub text: String,
    pub sha256: String,
}

pub fn read(path: &Path) -> Result<Input> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok(Input { path: path.display().to_string(), text, sha256 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Witness,
    None,
    True,
    False,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Witness => "witness",
            Outcome::None => "none",
            Outcome::True => "true",
            Outcome::False => "false",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Witness | Outcome::True => 0,
            Outcome::None | Outcome::False => 1,
        }
    }
}

pub struct Report {
    operation: &'static str,
    inputs: Vec<Value>,
    parameters: Map<String, Value>,
    outcome: Outcome,
    witness: Value,
    verified: Option<bool>,
    extra: Map<String, Value>,
}

pub fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Report {
    pub fn new(operation: &'static str, inputs: &[&Input]) -> Self {
        let inputs = inputs
            .iter()
            .map(|i| serde_json::json!({ "path": i.path, "sha256": i.sha256 }))
            .collect();
        Report {
            operation,
            inputs,
            parameters: Map::new(),
            outcome: Outcome::None,
            witness: Value::Null,
            verified: None,
            extra: Map::new(),
        }
    }

    pub fn param<T: Serialize>(mut self, key: &str, v: T) -> Self {
        self.parameters.insert(key.into(), json(&v));
        self
    }

    pub fn outcome(mut self, o: Outcome) -> Self {
        self.outcome = o;
        self
    }

    pub fn witness<T: Serialize>(mut self, w: &T) -> Self {
        self.witness = json(w);
        self
    }

    pub fn verified(mut self, ok: bool) -> Self {
        self.verified = Some(ok);
        self
    }

    pub fn extra<T: Serialize>(mut self, key: &str, v: T) -> Self {
        self.extra.insert(key.into(), json(&v));
        self
    }

    /// Prints the report and returns the exit code.
    pub fn emit(self) -> i32 {
        let mut body = self.extra;
        body.insert("operation".into(), Value::from(self.operation));
        body.insert("inputs".into(), Value::Array(self.inputs));
        body.insert("parameters".into(), Value::Object(self.parameters));
        body.insert("result".into(), Value::from(self.outcome.label()));
        body.insert("witness".into(), self.witness);
        body.insert("verified".into(), self.verified.map_or(Value::Null, Value::Bool));
        println!("{}", serde_json::to_string_pretty(&Value::Object(body)).expect("report serializes"));
        // a witness that fails its own re-check is reported but never counted as success
        if self.verified == Some(false) && self.outcome.exit_code() == 0 {
            return 2;
        }
        self.outcome.exit_code()
    }
}
