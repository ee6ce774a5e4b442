//! Machine-readable command reports.

use std::fmt::Write;

use csl_core::contact::Outcome;
use serde::Serialize;
use serde_json::Value;

/// One verdict with a one-line summary and the full result as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub outcome: Outcome,
    pub summary: String,
    pub detail: Value,
}

/// Everything a command produced. All fields except `elapsed_ms` are
/// deterministic for a fixed input.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    /// Combined verdict; absent for informational commands and errors.
    pub outcome: Option<Outcome>,
    pub exit_code: i32,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
    /// Human-readable rendering of `data`, used by the text output.
    #[serde(skip)]
    pub text: Option<String>,
}

pub const EXIT_INPUT_ERROR: i32 = 3;

impl Report {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        Report {
            command: command.into(),
            args,
            outcome: None,
            exit_code: 0,
            checks: Vec::new(),
            data: None,
            error: None,
            elapsed_ms: 0,
            text: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, outcome: Outcome, summary: impl Into<String>, detail: Value) {
        self.checks.push(CheckRecord { name: name.into(), outcome, summary: summary.into(), detail });
    }

    /// Exit 0 only when every check is certified; any refutation gives 1.
    pub fn finish(&mut self) {
        if self.error.is_some() {
            self.outcome = None;
            self.exit_code = EXIT_INPUT_ERROR;
            return;
        }
        if self.checks.is_empty() {
            self.exit_code = 0;
            return;
        }
        let o = self.checks.iter().fold(Outcome::Certified, |acc, c| acc.combine(c.outcome));
        self.outcome = Some(o);
        self.exit_code = o.exit_code();
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.error = Some(message.into());
        self.finish();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let head = std::iter::once(self.command.as_str()).chain(self.args.iter().map(String::as_str)).collect::<Vec<_>>().join(" ");
        for c in &self.checks {
            writeln!(out, "[{}] {}: {}", outcome_word(c.outcome), c.name, c.summary).unwrap();
        }
        if let Some(t) = &self.text {
            out.push_str(t);
        } else if let Some(Value::String(s)) = &self.data {
            writeln!(out, "{s}").unwrap();
        } else if let Some(d) = &self.data {
            writeln!(out, "{}", serde_json::to_string_pretty(d).expect("values serialize")).unwrap();
        }
        if let Some(e) = &self.error {
            writeln!(out, "error: {e}").unwrap();
        }
        let verdict = self.outcome.map_or(if self.error.is_some() { "error" } else { "done" }, outcome_word);
        writeln!(out, "{head}: {verdict} (exit {})", self.exit_code).unwrap();
        out
    }
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Certified => "certified",
        Outcome::Refuted => "refuted",
        Outcome::Inconclusive => "inconclusive",
    }
}
