use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input graph is not simple (self-loop, repeated edge, vertex out of range).
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: attachment set {set:?} is not a clique")]
    NotAClique { line: usize, set: Vec<usize> },

    #[error("line {line}: vertex {vertex} referenced before it exists")]
    ForwardReference { line: usize, vertex: usize },

    #[error("header declares n = {declared} but {found} attachment lines follow (k = {k})")]
    CountMismatch {
        k: usize,
        declared: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0:?} is not a k-clique of the instance")]
    NotAKClique(Vec<usize>),

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}
