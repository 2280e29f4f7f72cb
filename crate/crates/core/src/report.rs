use serde::{Deserialize, Serialize};

/// One named check inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub fn all_pass(assertions: &[Assertion]) -> bool {
    assertions.iter().all(|a| a.pass)
}

/// Process exit codes shared by the command-line front end.
pub mod exit {
    pub const OK: i32 = 0;
    /// Failed assertions, usage errors, anything without its own code.
    pub const OTHER: i32 = 1;
    /// Unreadable input, parse errors and structural validation failures.
    pub const PARSE: i32 = 2;
    pub const SOLVE: i32 = 3;
    pub const CERTIFY: i32 = 4;

    /// Exit code for a failed certification pipeline stage.
    pub fn for_stage(stage: &str) -> i32 {
        match stage {
            "validate" | "parse" => PARSE,
            "equations" | "solve" => SOLVE,
            "certify" => CERTIFY,
            _ => OTHER,
        }
    }
}
