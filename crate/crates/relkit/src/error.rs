use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{line}: {message}", path.display())]
    Schema {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: {message}", path.display())]
    Data {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Instance(relkit_core::Error),
    #[error("{0}")]
    Query(relkit_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for errors in a query, 2 for errors in the inputs.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Query(_) => 1,
            _ => 2,
        }
    }
}
