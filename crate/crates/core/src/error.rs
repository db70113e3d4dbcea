use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by parsing, tree enumeration, priority derivation and the study runner.
///
/// Matrix coordinates carried by variants are 1-based, as printed to users.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare { row: usize, found: usize, expected: usize },

    #[error("matrix is empty")]
    Empty,

    #[error("entry ({row},{col}): {message}")]
    InvalidEntry { row: usize, col: usize, message: String },

    #[error("matrix is incomplete")]
    Incomplete,

    #[error("matrix has {n} alternatives, at least {min} required")]
    TooSmall { n: usize, min: usize },

    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("comparison graph is disconnected")]
    DisconnectedGraph,

    #[error("graph has {count} spanning trees, above the enumeration cap of {cap}")]
    TreeCountExceedsCap { count: String, cap: u64 },

    #[error("tree edge ({0},{1}) is missing from the matrix")]
    EdgeNotInMatrix(usize, usize),

    #[error("not a spanning tree: {0}")]
    InvalidTree(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sample is constant, correlation undefined")]
    DegenerateSample,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("series {series}, matrix {matrix}: {source}")]
    Study {
        series: usize,
        matrix: usize,
        #[source]
        source: Box<Error>,
    },
}
