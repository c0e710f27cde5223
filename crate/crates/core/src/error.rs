use std::time::Duration;

use thiserror::Error;

use crate::measure::Measure;

/// Errors surfaced by every pipeline in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("atom `{0}` has no value in the interpretation")]
    UndeclaredAtom(String),

    #[error("connective `{0}` must be reduced before three-valued evaluation")]
    Unreduced(&'static str),

    #[error("{what} is {got}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("no atom occurrence at path `{0}`")]
    InvalidSite(String),

    #[error("interpretations range over different signatures")]
    SignatureMismatch,

    #[error("{0} is undefined for a knowledge base containing a contradiction constant")]
    Undefined(Measure),

    #[error("method `{method}` cannot compute {measure}")]
    UnsupportedMethod { method: String, measure: Measure },

    #[error("timed out after {elapsed:?} (value in [{lower}, {}])", upper.map_or("inf".to_string(), |u| u.to_string()))]
    Timeout {
        elapsed: Duration,
        lower: u64,
        upper: Option<u64>,
    },

    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("backend failure: {0}")]
    Backend(String),

    #[error("malformed solver output: {0}")]
    MalformedOutput(String),

    #[error("hard clauses are unsatisfiable")]
    HardUnsat,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("methods disagree on {kb} under {measure}: {detail}")]
    Disagreement {
        kb: String,
        measure: Measure,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
