use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph data or an out-of-range vertex/edge reference.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A name in a construction expression did not resolve; `path` locates
    /// the failing node in the expression tree.
    #[error("resolution error at {path}: {message}")]
    Resolve { path: String, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate error: {0}")]
    Certificate(String),

    /// A claimed fact was contradicted by a witness.
    #[error("fact refuted: {0}")]
    Refuted(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn certificate(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }
}
