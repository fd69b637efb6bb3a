//! Common carrier for closed-form bound evaluations.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A named bound evaluation.
///
/// `value` is the raw formula output and is never clamped into `[0, 1]`;
/// `valid` says whether the number carries information (typically `false`
/// once a probability bound reaches 1, or when a stated precondition such as
/// `eps <= sqrt(d)` fails). `inputs` echoes the resolved parameters so a
/// serialized result is self-describing; `BTreeMap` keeps the JSON key order
/// deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundResult {
    pub schema: u32,
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    pub valid: bool,
    pub note: String,
}

impl BoundResult {
    pub fn new(name: &str) -> Self {
        BoundResult {
            schema: 1,
            name: name.to_string(),
            inputs: BTreeMap::new(),
            value: f64::NAN,
            valid: false,
            note: String::new(),
        }
    }

    pub fn input(mut self, key: &str, v: f64) -> Self {
        self.inputs.insert(key.to_string(), v);
        self
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = v;
        self
    }

    pub fn valid(mut self, ok: bool) -> Self {
        self.valid = ok;
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.note = text.to_string();
        self
    }

    /// Serializes with stable key order (struct order plus sorted inputs).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("BoundResult is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let b = BoundResult::new("demo")
            .input("epsilon", 0.5)
            .input("d", 10.0)
            .value(0.25)
            .valid(true)
            .note("example");
        let json = b.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["schema"], 1);
        assert_eq!(parsed["name"], "demo");
        assert_eq!(parsed["inputs"]["epsilon"], 0.25 * 2.0);
        assert_eq!(parsed["valid"], true);
    }
}
