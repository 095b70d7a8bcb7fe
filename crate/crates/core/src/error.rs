use thiserror::Error;

/// Errors surfaced by graph loading, parameter validation, and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} is limited to n <= {limit}, got n = {n}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
