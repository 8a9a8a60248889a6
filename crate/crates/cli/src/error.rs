use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Json {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph: {0}")]
    Graph(plap_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] plap_core::Error),
}

impl CliError {
    /// 1 for failed computations that amount to a failed check, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(plap_core::Error::NonConvergence { .. })
            | CliError::Compute(plap_core::Error::InconsistentBracket { .. }) => 1,
            _ => 2,
        }
    }
}
