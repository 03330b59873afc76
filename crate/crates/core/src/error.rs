use std::path::PathBuf;

use thiserror::Error;

/// Coarse classification used by front ends to choose an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A malformed or missing input artifact, or an invalid argument value.
    Input,
    /// The data is well formed but cannot support the requested computation.
    Degenerate,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("signal too short: need {required} samples, have {available}")]
    SignalTooShort { required: usize, available: usize },

    #[error("window exceeds series: window of {window} samples, series of {len}")]
    WindowExceedsSeries { window: usize, len: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("insufficient samples: need at least {required}, have {available}")]
    InsufficientSamples { required: usize, available: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate training features: {0}")]
    DegenerateFeatures(String),

    #[error("degenerate split: {split} split {reason}")]
    DegenerateSplit { split: String, reason: String },

    #[error("degenerate class: {0}")]
    DegenerateClass(String),

    #[error("empty batch")]
    EmptyBatch,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("single-class input: {0}")]
    SingleClass(String),

    #[error("zero pooled standard deviation")]
    ZeroPooledStd,

    #[error("all-zero confusion matrix")]
    EmptyConfusion,

    #[error("missing header in {path}")]
    MissingHeader { path: String },

    #[error("malformed header in {path}: {reason}")]
    MalformedHeader { path: String, reason: String },

    #[error("unsupported format version {found} in {path} (expected {expected})")]
    UnsupportedVersion {
        path: String,
        found: String,
        expected: String,
    },

    #[error("unknown label {label:?} at {path} record {record} (line {line})")]
    UnknownLabel {
        path: String,
        record: usize,
        line: u64,
        label: String,
    },

    #[error("inconsistent sampling rate at {path} record {record} (line {line}): {found} Hz, header says {expected} Hz")]
    InconsistentFs {
        path: String,
        record: usize,
        line: u64,
        found: f64,
        expected: f64,
    },

    #[error("truncated record at {path} record {record} (line {line}): {reason}")]
    TruncatedRecord {
        path: String,
        record: usize,
        line: u64,
        reason: String,
    },

    #[error("malformed record at {path} record {record} (line {line}): {reason}")]
    MalformedRecord {
        path: String,
        record: usize,
        line: u64,
        reason: String,
    },

    #[error("cannot parse {path}: {reason}")]
    Parse { path: String, reason: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Context { source, .. } => source.kind(),
            Error::DegenerateFeatures(_)
            | Error::DegenerateSplit { .. }
            | Error::DegenerateClass(_)
            | Error::SingleClass(_)
            | Error::ZeroPooledStd
            | Error::EmptyConfusion
            | Error::EmptyBatch
            | Error::SignalTooShort { .. }
            | Error::InsufficientSamples { .. } => ErrorKind::Degenerate,
            _ => ErrorKind::Input,
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
