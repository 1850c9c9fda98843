use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{topology} needs {what} >= {min}, got {got}")]
    TooSmall {
        topology: &'static str,
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("configuration has {got} entries but the graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid edge list: {0}")]
    EdgeList(String),

    #[error("invalid costs: need infection > inoculation > 0 (got I={infection}, V={inoculation})")]
    InvalidCosts { infection: f64, inoculation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("brute-force enumeration is limited to {limit} nodes, graph has {nodes}")]
    TooLarge { nodes: usize, limit: usize },

    #[error("no unique stationary distribution: {0}")]
    Reducible(String),

    #[error("stationary solve failed: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("configuration: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Reducible(_) | Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}
