use thiserror::Error;

/// Errors raised by the library. Outcomes that are data (a violated
/// property, a failed embedding attempt) are returned as values instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("capacity exceeded: {what} is {actual}, limit is {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("vertex sets must be disjoint, both contain {0}")]
    Overlap(usize),

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("growth factor {0} does not exceed 1, the sequence never reaches its target")]
    NonProgress(String),

    #[error("parameters infeasible: {0}")]
    Infeasible(String),

    #[error("key selection infeasible: {0}")]
    KeySelection(String),
}

pub type Result<T> = std::result::Result<T, Error>;
