//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("record {id}: {message}")]
    Record { id: String, message: String },

    #[error("line {line}: unknown language {value:?} (expected \"java\" or \"python\")")]
    UnknownLanguage { line: usize, value: String },

    #[error("unterminated string literal at byte offset {offset}")]
    UnterminatedString { offset: usize },

    #[error("record {id}: export tokens do not match parsed tokens at position {position}: {expected:?} vs {found:?}")]
    TokenMismatch {
        id: String,
        position: usize,
        expected: String,
        found: String,
    },

    #[error("record {id}: export carries {received} attention values for {tokens} tokens")]
    LengthMismatch {
        id: String,
        tokens: usize,
        received: usize,
    },

    #[error("attention tensor dimension mismatch: {message}")]
    DimensionMismatch { message: String },

    #[error("attention matrix row {row} sums to {sum} (expected 1 within {tolerance})")]
    RowSumViolation {
        row: usize,
        sum: f64,
        tolerance: f64,
    },

    #[error("strategy {strategy} requires {what}")]
    MissingDictionary {
        strategy: &'static str,
        what: &'static str,
    },

    #[error("record {id} has no matching snippet")]
    UnknownRecord { id: String },

    #[error("empty input: {message}")]
    EmptyInput { message: String },

    #[error("invalid configuration: {message}")]
    InvalidConfig { message: String },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
