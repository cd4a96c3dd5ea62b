use thiserror::Error;

/// Errors raised by graph construction, parsing, and the spectral checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {n} vertices; at most {max} are supported")]
    TooManyVertices { n: usize, max: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {u}-{v} is already present")]
    EdgePresent { u: usize, v: usize },

    #[error("edge {u}-{v} is absent")]
    EdgeAbsent { u: usize, v: usize },

    #[error("operation requires a graph with at least one vertex")]
    EmptyGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("partition is not equitable: vertex {vertex} disagrees with its cell on cell {cell}")]
    NotEquitable { vertex: usize, cell: usize },

    #[error("partition does not match the graph: {0}")]
    PartitionMismatch(String),

    #[error("divisor matrix eigenvalue has imaginary part {0:e}")]
    ComplexEigenvalue(f64),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("graph6{}: {kind}", line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Graph6 { line: Option<usize>, kind: Graph6Error },

    #[error("i/o error: {0}")]
    Io(String),
}

/// Reasons a graph6 record fails to decode.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("byte {byte} at offset {offset} is outside 63..=126")]
    MalformedByte { byte: u8, offset: usize },
    #[error("expected {expected} bytes, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex count {0} exceeds the supported maximum")]
    Oversize(u64),
    #[error("empty record")]
    Empty,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
