use std::fmt::Display;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }
}

/// A statement that holds for every valid input; a failure is a bug.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub details: Value,
    pub witnesses: Vec<Value>,
    pub assertions: Vec<Assertion>,
}

impl Outcome {
    pub fn pass(details: Value) -> Self {
        Outcome {
            pass: true,
            details,
            witnesses: Vec::new(),
            assertions: Vec::new(),
        }
    }

    pub fn fail(details: Value, witnesses: Vec<Value>) -> Self {
        Outcome {
            pass: false,
            details,
            witnesses,
            assertions: Vec::new(),
        }
    }

    pub fn verdict(pass: bool, details: Value, witnesses: Vec<Value>) -> Self {
        Outcome {
            pass,
            details,
            witnesses,
            assertions: Vec::new(),
        }
    }

    pub fn assert(mut self, name: &str, holds: bool) -> Self {
        self.assertions.push(Assertion {
            name: name.into(),
            holds,
        });
        self
    }
}

#[derive(Debug, Clone)]
pub enum Failure {
    /// Unreadable or invalid input.
    Input(String),
    /// A theory assertion failed: an implementation bug.
    Theory(String),
}

pub type CmdResult = Result<Outcome, Failure>;

pub fn input(e: impl Display) -> Failure {
    Failure::Input(e.to_string())
}

/// Variant name and message of a library error.
pub fn error_witness<E: Display + std::fmt::Debug>(e: &E) -> Value {
    let debug = format!("{e:?}");
    let kind: String = debug
        .chars()
        .take_while(|c| c.is_alphanumeric() || *c == '_')
        .collect();
    json!({ "kind": kind, "message": e.to_string() })
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub details: Value,
    pub witnesses: Vec<Value>,
    pub theory_assertions: Vec<Assertion>,
    /// Set when a theory assertion failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implementation_bug: Option<String>,
    pub timing: Timing,
}

impl Report {
    pub fn build(command: Vec<String>, result: CmdResult, elapsed_ms: f64) -> Report {
        let timing = Timing { elapsed_ms };
        match result {
            Ok(o) => {
                if let Some(a) = o.assertions.iter().find(|a| !a.holds) {
                    let bug = format!("theory assertion failed: {}", a.name);
                    return Report {
                        command,
                        verdict: Verdict::Error,
                        details: o.details,
                        witnesses: o.witnesses,
                        theory_assertions: o.assertions,
                        implementation_bug: Some(bug),
                        timing,
                    };
                }
                let mut witnesses = o.witnesses;
                if !o.pass && witnesses.is_empty() {
                    witnesses.push(json!({ "kind": "unspecified" }));
                }
                Report {
                    command,
                    verdict: if o.pass { Verdict::Pass } else { Verdict::Fail },
                    details: o.details,
                    witnesses,
                    theory_assertions: o.assertions,
                    implementation_bug: None,
                    timing,
                }
            }
            Err(Failure::Input(msg)) => Report {
                command,
                verdict: Verdict::Error,
                details: json!({ "error": msg }),
                witnesses: Vec::new(),
                theory_assertions: Vec::new(),
                implementation_bug: None,
                timing,
            },
            Err(Failure::Theory(msg)) => Report {
                command,
                verdict: Verdict::Error,
                details: json!({ "error": msg }),
                witnesses: Vec::new(),
                theory_assertions: Vec::new(),
                implementation_bug: Some(msg),
                timing,
            },
        }
    }

    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        };
        let mut s = format!(
            "{}: {verdict}",
            self.command
                .iter()
                .take(2)
                .cloned()
                .collect::<Vec<_>>()
                .join(" ")
        );
        if !self.witnesses.is_empty() {
            s.push_str(&format!(
                " ({} witness{})",
                self.witnesses.len(),
                if self.witnesses.len() == 1 { "" } else { "es" }
            ));
        }
        if let Some(bug) = &self.implementation_bug {
            s.push_str(&format!("; implementation bug: {bug}"));
        } else if self.verdict == Verdict::Error {
            if let Some(e) = self.details.get("error").and_then(Value::as_str) {
                s.push_str(&format!("; {e}"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_assertion_is_an_error() {
        let o = Outcome::pass(json!({})).assert("law", false);
        let r = Report::build(vec!["x".into()], Ok(o), 0.0);
        assert_eq!(r.verdict, Verdict::Error);
        assert!(r.implementation_bug.is_some());
    }

    #[test]
    fn fail_always_has_a_witness() {
        let r = Report::build(vec![], Ok(Outcome::fail(json!({}), vec![])), 0.0);
        assert_eq!(r.verdict.exit_code(), 1);
        assert_eq!(r.witnesses.len(), 1);
    }
}
