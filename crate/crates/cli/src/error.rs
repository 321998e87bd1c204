use std::path::PathBuf;

use thiserror::Error;

/// Failures that stop a run before any check executes. All map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read or write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config does not parse: {0}")]
    Parse(String),
    #[error("invalid config field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("config kind `{found}` does not match subcommand `{expected}`")]
    WrongSubcommand { expected: &'static str, found: &'static str },
}
