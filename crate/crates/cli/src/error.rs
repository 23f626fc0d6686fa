use thiserror::Error;

/// Failures of a CLI invocation, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: syntax error: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}:{line}:{column}: schema error: {message}")]
    Schema { path: String, line: usize, column: usize, message: String },
    #[error("{path}: invalid model: {message}")]
    Semantic { path: String, message: String },
    #[error("{0}")]
    Compute(#[from] gibbs_core::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    /// 0 success, 1 computation, 2 budget, 3 syntax, 4 schema, 5 semantic,
    /// 64 usage, 66 unreadable input or unwritable output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(e) if e.is_budget() => 2,
            CliError::Compute(_) => 1,
            CliError::Syntax { .. } => 3,
            CliError::Schema { .. } => 4,
            CliError::Semantic { .. } => 5,
            CliError::Usage(_) => 64,
            CliError::Io { .. } => 66,
        }
    }
}
