//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("value out of range: {0}")]
    ValueOutOfRange(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    #[error("no feasible path: the final cumulative map is empty")]
    NoFeasiblePath,

    #[error("instance too large for exhaustive search: {0}")]
    RefuseTooLarge(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("bad thresholds: {0}")]
    BadThresholds(String),

    #[error("bad magic: {0}")]
    BadMagic(String),

    #[error("truncated file: {0}")]
    TruncatedFile(String),

    #[error("trailing data: {0}")]
    TrailingData(String),

    #[error("empty sequence: frame count must be at least 1")]
    EmptySequence,

    #[error("mixed dimensions: {0}")]
    MixedDimensions(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("empty directory: {0}")]
    EmptyDirectory(String),

    #[error("bad csv: {0}")]
    BadCsv(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code for this error, used by the CLI's
    /// single-line stderr reporting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ValueOutOfRange(_) => "ValueOutOfRange",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::OutOfBounds(_) => "OutOfBounds",
            Error::NoFeasiblePath => "NoFeasiblePath",
            Error::RefuseTooLarge(_) => "RefuseTooLarge",
            Error::InvalidScenario(_) => "InvalidScenario",
            Error::EmptyInput(_) => "EmptyInput",
            Error::BadThresholds(_) => "BadThresholds",
            Error::BadMagic(_) => "BadMagic",
            Error::TruncatedFile(_) => "TruncatedFile",
            Error::TrailingData(_) => "TrailingData",
            Error::EmptySequence => "EmptySequence",
            Error::MixedDimensions(_) => "MixedDimensions",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
            Error::EmptyDirectory(_) => "EmptyDirectory",
            Error::BadCsv(_) => "BadCsv",
            Error::Io(_) => "Io",
        }
    }
}
