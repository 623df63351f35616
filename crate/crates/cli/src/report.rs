//! Check records and the JSON report with its content digest.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for reference; never affects the exit code.
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Value,
    /// The identity being checked, written out.
    pub reference: String,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, reference: &str, witness: Value) -> Check {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
            witness,
            reference: reference.into(),
        }
    }

    pub fn info(name: impl Into<String>, reference: &str, witness: Value) -> Check {
        Check {
            name: name.into(),
            status: Status::Info,
            witness,
            reference: reference.into(),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub checks: Vec<Check>,
    pub results: Value,
    pub dropped: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: &str, input: Value) -> Report {
        Report {
            command: command.into(),
            input,
            checks: Vec::new(),
            results: Value::Null,
            dropped: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// The report body without timing; its digest is stable across runs.
    fn body(&self) -> Value {
        let input_text = serde_json::to_string(&self.input).expect("JSON values serialize");
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input": self.input,
            "input_digest": sha256_hex(input_text.as_bytes()),
            "checks": self.checks,
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "info": self.count(Status::Info),
            },
            "results": self.results,
            "dropped": self.dropped,
        })
    }

    pub fn to_json(&self, timing_ms: f64) -> Value {
        let mut body = self.body();
        let text = serde_json::to_string(&body).expect("JSON values serialize");
        body["digest"] = Value::String(sha256_hex(text.as_bytes()));
        body["timing_ms"] = json!(timing_ms);
        body
    }

    pub fn summary(&self) -> String {
        let gated = self.count(Status::Pass) + self.count(Status::Fail);
        let mut out = format!(
            "{}: {}/{} checks pass",
            self.command,
            self.count(Status::Pass),
            gated
        );
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            out.push_str(&format!("\n  [{tag}] {}", c.name));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_timing() {
        let mut r = Report::new("x", json!({"a": 1}));
        r.push(Check::new("c", true, "1 = 1", json!(null)));
        let a = r.to_json(1.0);
        let b = r.to_json(99.0);
        assert_eq!(a["digest"], b["digest"]);
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn info_does_not_gate() {
        let mut r = Report::new("x", Value::Null);
        r.push(Check::info("note", "", Value::Null));
        assert!(r.passed());
        r.push(Check::new("bad", false, "", Value::Null));
        assert!(!r.passed());
    }
}
