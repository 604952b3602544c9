use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("no examples")]
    NoExamples,

    #[error("line {line}: expected {expected} fields, found {found}")]
    RowWidth {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, attribute {attribute} ({name}): cannot parse {value:?} as a number")]
    MalformedNumber {
        line: usize,
        attribute: usize,
        name: String,
        value: String,
    },

    #[error("line {line}, attribute {attribute} ({name}): non-finite value {value:?}")]
    NonFinite {
        line: usize,
        attribute: usize,
        name: String,
        value: String,
    },

    #[error("line {line}, attribute {attribute} ({name}): unknown nominal value {value:?}")]
    UnknownNominal {
        line: usize,
        attribute: usize,
        name: String,
        value: String,
    },

    #[error("line {line}: unknown class label {label:?}")]
    UnknownClass { line: usize, label: String },

    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("class {class:?} has {count} examples, fewer than the {required} required")]
    TooFewExamples {
        class: String,
        count: usize,
        required: usize,
    },

    #[error("class {class:?} has no examples")]
    EmptyClass { class: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("no rules survived induction; try a larger gamma or lower thresholds")]
    NoRules,

    #[error("task on partition {partition} failed: {source}")]
    Task {
        partition: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("timing grid has no cell for {cores} cores at data fraction {fraction}")]
    MissingCell { cores: usize, fraction: f64 },

    #[error("model file: {0}")]
    Model(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) => 1,
            Error::NoRules => 3,
            Error::Task { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
