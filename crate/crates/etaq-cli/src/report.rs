//! The report envelope every subcommand emits, with its three renderings.
//!
//! Reports are pure functions of the command inputs: fields appear in a
//! fixed order, object keys are sorted, and nothing time- or
//! machine-dependent is included, so identical invocations produce
//! byte-identical output.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use etaq::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Data,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Data => "data",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub payload: Value,
    pub tool_version: String,
    /// Pre-rendered lines for the text format, one record per line.
    #[serde(skip)]
    pub text_lines: Vec<String>,
}

impl Report {
    pub fn new(
        command: &str,
        inputs: &[(&str, String)],
        outcome: Outcome,
        payload: Value,
        text_lines: Vec<String>,
    ) -> Self {
        Report {
            command: command.to_owned(),
            inputs: inputs
                .iter()
                .map(|(k, v)| ((*k).to_owned(), v.clone()))
                .collect(),
            outcome,
            payload,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            text_lines,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut out = String::from("key,value\n");
        for (key, val) in rows {
            out.push_str(&csv_escape(&key));
            out.push(',');
            out.push_str(&csv_escape(&val));
            out.push('\n');
        }
        out
    }

    fn render_text(&self) -> String {
        let inputs = self
            .inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut out = format!(
            "etaq {} {} outcome={} version={}\n",
            self.command, inputs, self.outcome, self.tool_version
        );
        for line in &self.text_lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Depth-first flattening of a JSON value into `(dotted key, scalar)` rows,
/// preserving object key order (already sorted) and array order.
fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |suffix: &str| {
        if prefix.is_empty() {
            suffix.to_owned()
        } else {
            format!("{prefix}.{suffix}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, rows);
            }
        }
        Value::Null => rows.push((prefix.to_owned(), String::new())),
        Value::String(s) => rows.push((prefix.to_owned(), s.clone())),
        other => rows.push((prefix.to_owned(), other.to_string())),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

/// JSON object for a [`VerificationReport`].
pub fn verification_value(report: &VerificationReport) -> Value {
    serde_json::json!({
        "subject": report.subject,
        "pass": report.pass,
        "checked_to": report.checked_to,
        "checked_count": report.checked_count,
        "first_counterexample": report.first_counterexample.as_ref().map(
            |(index, value)| serde_json::json!({ "index": index, "value": value })
        ),
    })
}

/// Text lines for a [`VerificationReport`].
pub fn verification_lines(report: &VerificationReport) -> Vec<String> {
    let mut lines = vec![
        format!("subject: {}", report.subject),
        format!(
            "checked: {} indices up to {}",
            report.checked_count, report.checked_to
        ),
        format!("pass: {}", report.pass),
    ];
    if let Some((index, value)) = &report.first_counterexample {
        lines.push(format!("counterexample: index {index}, value {value}"));
    }
    lines
}
