use std::fmt;

/// Command failures other than failed checks, with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Missing files, malformed instances or configuration: exit 2.
    Schema(String),
    /// The engine failed on valid input: exit 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<indexforms::Error> for CliError {
    fn from(e: indexforms::Error) -> CliError {
        CliError::Internal(e.to_string())
    }
}

/// Engine errors raised while reading input are the caller's fault.
pub fn schema(e: indexforms::Error) -> CliError {
    CliError::Schema(e.to_string())
}
