use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input file {path} not found")]
    MissingFile { path: PathBuf },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed delimited text at line {line}: {message}")]
    Malformed { line: u64, message: String },

    #[error("ragged row at line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("quoted field at line {line} is not supported")]
    QuotedField { line: u64 },

    #[error("class attribute `{0}` is not a column of the dataset")]
    UnknownClassAttribute(String),

    #[error("dataset has no data rows")]
    EmptyDataset,

    #[error("dataset has no predictive attributes besides the class `{0}`")]
    NoPredictiveAttributes(String),

    #[error("`{0}` is not a valid SQL identifier")]
    InvalidIdentifier(String),

    #[error("identifiers collide after sanitization: `{first}` and `{second}` both map to `{sanitized}`")]
    IdentifierCollision {
        first: String,
        second: String,
        sanitized: String,
    },

    #[error("invalid build parameter: {0}")]
    InvalidParameter(String),

    #[error("relation `{0}` already exists")]
    NameCollision(String),

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{relation}` has no column `{column}`")]
    UnknownColumn { relation: String, column: String },

    #[error("source table `{0}` is empty")]
    EmptySource(String),

    #[error("children populations sum to {children}, parent population is {parent}")]
    PopulationMismatch { parent: u64, children: u64 },

    #[error("malformed result table: {0}")]
    MalformedResult(String),

    #[error("SQL failed: {source}\n  statement: {sql}")]
    Sql {
        sql: String,
        #[source]
        source: rusqlite::Error,
    },

    #[error("backend error: {0}")]
    Backend(#[from] rusqlite::Error),

    #[error("export format error: {0}")]
    Export(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn sql(sql: impl Into<String>, source: rusqlite::Error) -> Self {
        Error::Sql {
            sql: sql.into(),
            source,
        }
    }
}
