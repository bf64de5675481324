//! Report containers and bit-stable serialization.
//!
//! JSON output is canonical: keys sorted (the default serde_json map is a
//! BTreeMap), exact quantities rendered as decimal integers or `p/q`
//! strings, floats confined to display-only fields. Identical inputs give
//! byte-identical bytes, so wall-clock timing is never embedded in a
//! report; the CLI logs it to stderr instead.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::Limits;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The seed-derivation and stream generator identifier recorded in every
/// randomized report. Per-trial seeds are `splitmix64(master ^ ((trial+1) *
/// 0x9E3779B97F4A7C15))`; the stream is ChaCha12 keyed with four
/// little-endian splitmix64 outputs of the derived seed.
pub const GENERATOR_ID: &str = "splitmix64-chacha12";

/// Outcome of one verification sweep; `violations` empty means pass.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub n: u64,
    pub violations: Vec<Value>,
    pub notes: Vec<String>,
    /// Largest ratio observed against the sweep's threshold, as `p/q`,
    /// where the sweep tracks one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<String>,
}

impl CheckReport {
    pub fn new(check: &str, n: u64) -> Self {
        CheckReport {
            check: check.to_string(),
            n,
            violations: Vec::new(),
            notes: Vec::new(),
            max_ratio: None,
        }
    }

    pub fn violation(&mut self, v: Value) {
        self.violations.push(v);
    }

    pub fn note(&mut self, msg: &str) {
        self.notes.push(msg.to_string());
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "check": self.check,
            "n": self.n,
            "violations": self.violations,
            "notes": self.notes,
            "max_ratio": self.max_ratio,
        })
    }
}

/// Reproducibility header embedded verbatim in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub generator: String,
    pub seed: u64,
    pub limits: Limits,
}

impl RunManifest {
    pub fn new(command: String, seed: u64, limits: &Limits) -> Self {
        RunManifest {
            version: TOOL_VERSION.to_string(),
            command,
            generator: GENERATOR_ID.to_string(),
            seed,
            limits: limits.clone(),
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}

/// Canonical JSON bytes: sorted keys, newline-terminated.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Wrap a payload with its manifest and serialize canonically.
pub fn render_report(manifest: &RunManifest, payload: Value) -> String {
    canonical_json(&json!({
        "manifest": manifest.to_value(),
        "report": payload,
    }))
}

pub fn write_output(path: Option<&std::path::Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_sorts_keys_and_is_stable() {
        let v = json!({"zeta": 1, "alpha": {"b": 2, "a": 3}});
        let s1 = canonical_json(&v);
        let s2 = canonical_json(&v);
        assert_eq!(s1, s2);
        assert!(s1.find("alpha").unwrap() < s1.find("zeta").unwrap());
        assert!(s1.ends_with('\n'));
    }

    #[test]
    fn check_report_pass_fail() {
        let mut r = CheckReport::new("demo", 3);
        assert!(r.passed());
        r.violation(json!({"i": 1}));
        assert!(!r.passed());
    }
}
