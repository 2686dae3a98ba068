use thiserror::Error;

use crate::lattice::Probe;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("model is degenerate: L + mu I is not positive definite")]
    DegenerateModel,

    #[error("empirical characteristic function has modulus {modulus:e} at probe {probe}, at or below the floor {floor:e}")]
    DegenerateCharFn {
        probe: Probe,
        modulus: f64,
        floor: f64,
    },

    #[error("plug-in inversion is ill-conditioned: smallest eigenvalue {smallest:e}")]
    IllConditionedPlugin { smallest: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short, stable reason code used in experiment output.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::DegenerateModel => "degenerate_model",
            Error::DegenerateCharFn { .. } => "degenerate_charfn",
            Error::IllConditionedPlugin { .. } => "ill_conditioned_plugin",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}
