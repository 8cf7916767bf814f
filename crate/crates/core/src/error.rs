use thiserror::Error;

/// Errors raised by the library.
///
/// Infeasible sharp-interface fields are not errors: their energies are
/// reported as `f64::INFINITY`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e}) within {intervals} intervals")]
    NonConvergence {
        tolerance: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("refinement budget of {0} evaluations exhausted")]
    BudgetExceeded(usize),

    #[error("infeasible constraint set: {0}")]
    Infeasible(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
