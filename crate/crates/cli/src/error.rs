use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid scenario, unwritable output.
    #[error("{0}")]
    Input(String),
    /// A library invariant broke at runtime.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<varbound_core::Error> for CliError {
    fn from(e: varbound_core::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
