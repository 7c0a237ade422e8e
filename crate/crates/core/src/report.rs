//! Machine-readable reports emitted by the command-line tool.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            results: Value::Object(Default::default()),
            checks: Vec::new(),
        }
    }

    pub fn result<T: Serialize>(&mut self, key: &str, v: T) -> &mut Self {
        if let Value::Object(m) = &mut self.results {
            m.insert(key.to_string(), to_value(v));
        }
        self
    }

    /// Records a check; it passes when both sides serialize identically.
    pub fn check<E: Serialize, A: Serialize>(&mut self, name: &str, expected: E, actual: A) -> bool {
        let (expected, actual) = (to_value(expected), to_value(actual));
        let pass = expected == actual;
        self.checks.push(Check { name: name.to_string(), expected, actual, pass });
        pass
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&to_value(self)).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        if let Value::Object(m) = &self.results {
            for (k, v) in m {
                let _ = writeln!(out, "  {k}: {}", compact(v));
            }
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            if c.pass {
                let _ = writeln!(out, "  [{mark}] {}", c.name);
            } else {
                let _ = writeln!(
                    out,
                    "  [{mark}] {}: expected {}, got {}",
                    c.name,
                    compact(&c.expected),
                    compact(&c.actual)
                );
            }
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
