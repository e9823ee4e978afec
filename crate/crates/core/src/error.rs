use std::io;

use thiserror::Error;

pub type Result<T, E = ChhError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ChhError {
    #[error("invalid capacity {0}: summaries need at least one counter")]
    InvalidCapacity(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no counter configuration fits in {0} bytes")]
    InfeasibleSpace(u64),

    #[error("empty stream")]
    EmptyStream,

    #[error("parse error at byte offset {offset}: {msg}")]
    ParseBinary { offset: u64, msg: String },

    #[error("parse error at line {line}: {msg}")]
    ParseCsv { line: u64, msg: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
