use thiserror::Error;

/// Errors raised by the library. Failed verifications are not errors; they
/// come back as report checks with status `fail`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Fixture {
        path: String,
        #[source]
        source: Box<Error>,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("matrix is not unimodular ({0})")]
    NotUnimodular(String),
    #[error("unsupported prime {0}: no fixture data available")]
    UnsupportedPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("lattice is not closed under the action: {0}")]
    NotClosed(String),
    #[error("quotient has torsion: {0}")]
    Torsion(String),
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("unknown generator kind '{0}'")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, Error>;
