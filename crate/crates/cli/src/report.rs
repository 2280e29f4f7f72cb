use bandforge::report::{all_pass, exit, Assertion};
use serde::Serialize;
use serde_json::Value;

/// Output of one command. Keys of `inputs` and `results` are emitted in
/// sorted order, so identical invocations give identical JSON.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results,
            assertions: Vec::new(),
        }
    }

    pub fn check(mut self, name: &str, pass: bool, detail: impl Into<String>) -> Self {
        self.assertions.push(Assertion::new(name, pass, detail));
        self
    }

    pub fn exit_code(&self) -> i32 {
        if all_pass(&self.assertions) {
            exit::OK
        } else {
            exit::OTHER
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        render_value(&mut out, "", &self.results);
        for a in &self.assertions {
            let mark = if a.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {}: {}\n", a.name, a.detail));
        }
        out
    }
}

fn render_value(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_value(out, &key, v);
            }
        }
        Value::String(s) => out.push_str(&format!("  {prefix}: {s}\n")),
        other => out.push_str(&format!("  {prefix}: {other}\n")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// A command that could not produce a report.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    /// Partial report to print anyway, e.g. an invalid certificate.
    pub report: Option<Report>,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            report: None,
        }
    }

    pub fn parse(message: impl ToString) -> Self {
        Self::new(exit::PARSE, message.to_string())
    }

    pub fn other(message: impl ToString) -> Self {
        Self::new(exit::OTHER, message.to_string())
    }
}
