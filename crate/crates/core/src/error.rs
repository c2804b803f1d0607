use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested accuracy cannot be met in this regime.
    #[error("precision error: {0}")]
    Precision(String),
    /// An iterative method did not converge within its budget.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// A configured work budget would be exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// Mesh construction produced an invalid triangulation.
    #[error("mesh error: {0}")]
    Mesh(String),
    /// A factorization broke down (matrix not positive definite).
    #[error("singular system: {0}")]
    Singularity(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
