//! Process-level error type carrying the exit code contract: 2 for
//! parse and validation failures, 3 for verification failures, 1 for
//! anything else.

use std::fmt;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn verification(message: String) -> Self {
        CliError { code: 3, message }
    }

    pub fn runtime(message: String) -> Self {
        CliError { code: 1, message }
    }

    /// Library failures that a validated circuit should never hit.
    pub fn internal(e: impl fmt::Display) -> Self {
        CliError {
            code: 1,
            message: format!("internal: {e}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}
