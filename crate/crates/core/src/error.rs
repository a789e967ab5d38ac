use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("network has no layers")]
    NoLayers,
    #[error("layer {layer}: matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NonSquare {
        layer: usize,
        rows: usize,
        row: usize,
        cols: usize,
    },
    #[error("layer {layer}: non-binary entry {value} at ({i}, {j})")]
    NonBinary {
        layer: usize,
        i: usize,
        j: usize,
        value: i64,
    },
    #[error("layer {layer}: node count must be at least 1")]
    EmptyLayer { layer: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid label {label} at layer {layer}, node {node}")]
    InvalidLabel {
        layer: usize,
        node: usize,
        label: usize,
    },
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("invalid stick fraction {0} (must lie in (0, 1])")]
    InvalidFraction(f64),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("unknown scenario `{0}` (expected `pageant` or `markov`)")]
    UnknownScenario(String),
    #[error("empty trace")]
    EmptyTrace,
    #[error("sampler invariant violated: {0}")]
    Invariant(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
