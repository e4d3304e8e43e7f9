use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("solver did not converge ({context}); best residual {best_residual:e}")]
    Solver { context: String, best_residual: f64 },
    #[error("solver starts disagree ({context}); spread {spread:e}")]
    NonUnique { context: String, spread: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn solver_err(context: impl Into<String>, best_residual: f64) -> Error {
    Error::Solver { context: context.into(), best_residual }
}
