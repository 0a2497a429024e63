//! Evaluation reports and their text and JSON serializations.
//!
//! The JSON document has the shape
//!
//! ```text
//! { "schema": "weylcalc.report", "version": 1,
//!   "entries": [ { "line", "column", "statement", "status",
//!                  "values": [ { "label", "value" } ],
//!                  "residuals": [ { "label", "value", "zero" } ],
//!                  "message" } ],
//!   "summary": { "statements", "errors", "checks", "passed", "failed" } }
//! ```
//!
//! `status` is one of `ok`, `pass`, `fail`, `error`. Optional fields are
//! `null` when absent. The version increases on any incompatible change.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "weylcalc.report";
pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub label: Option<String>,
    pub value: String,
}

impl Item {
    pub fn labeled(label: impl Into<String>, value: impl Into<String>) -> Self {
        Item { label: Some(label.into()), value: value.into() }
    }

    pub fn plain(value: impl Into<String>) -> Self {
        Item { label: None, value: value.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualItem {
    pub label: String,
    pub value: String,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub line: usize,
    pub column: usize,
    pub statement: String,
    pub status: Status,
    pub values: Vec<Item>,
    pub residuals: Vec<ResidualItem>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub statements: usize,
    pub errors: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: u32,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Default for Report {
    fn default() -> Self {
        Report { schema: SCHEMA.into(), version: VERSION, entries: Vec::new(), summary: Summary::default() }
    }
}

impl Report {
    pub fn push(&mut self, e: Entry) {
        let s = &mut self.summary;
        s.statements += 1;
        match e.status {
            Status::Ok => {}
            Status::Error => s.errors += 1,
            Status::Pass => {
                s.checks += 1;
                s.passed += 1;
            }
            Status::Fail => {
                s.checks += 1;
                s.failed += 1;
            }
        }
        self.entries.push(e);
    }

    /// No errors and no failed checks.
    pub fn success(&self) -> bool {
        self.summary.errors == 0 && self.summary.failed == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Text => emit_text(r).into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
    }
}

pub fn emit_entry_text(out: &mut String, e: &Entry) {
    let _ = writeln!(out, "[{}:{}] {}", e.line, e.column, e.statement);
    match e.status {
        Status::Pass => out.push_str("  PASS\n"),
        Status::Fail => out.push_str("  FAIL\n"),
        _ => {}
    }
    for v in &e.values {
        match &v.label {
            Some(l) => {
                let _ = writeln!(out, "  {l} = {}", v.value);
            }
            None => {
                let _ = writeln!(out, "  {}", v.value);
            }
        }
    }
    for r in &e.residuals {
        let _ = writeln!(out, "  residual {} = {}", r.label, r.value);
    }
    if let Some(m) = &e.message {
        let prefix = if e.status == Status::Error { "error: " } else { "" };
        let _ = writeln!(out, "  {prefix}{m}");
    }
}

pub fn emit_text(r: &Report) -> String {
    let mut out = format!("# {} v{}\n", r.schema, r.version);
    for e in &r.entries {
        emit_entry_text(&mut out, e);
    }
    let s = &r.summary;
    let _ = writeln!(
        out,
        "# {} statements, {} errors, {} checks ({} passed, {} failed)",
        s.statements, s.errors, s.checks, s.passed, s.failed
    );
    out
}

pub fn from_json(bytes: &[u8]) -> serde_json::Result<Report> {
    serde_json::from_slice(bytes)
}
