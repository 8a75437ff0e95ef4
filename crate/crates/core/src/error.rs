use std::path::PathBuf;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),
    #[error("no positive integer solution for free degrees ({0}, {1})")]
    Infeasible(usize, usize),
    #[error("matrix construction failed: {0}")]
    Construction(String),
    #[error("unsupported parity-check structure: {0}")]
    UnsupportedStructure(String),
    #[error("malformed alist data at line {line}: {msg}")]
    Alist { line: usize, msg: String },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("no open tunnel anywhere on the SNR grid")]
    NoThreshold,
    #[error("least-squares fit is rank deficient")]
    RankDeficient,
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn dim(expected: usize, actual: usize) -> Self {
        Error::Dimension { expected, actual }
    }
}
