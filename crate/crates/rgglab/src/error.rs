use thiserror::Error;

/// Error taxonomy shared by the whole crate.
///
/// The CLI maps these onto process exit codes: validation-type errors
/// (`Domain`, `Parse`, `Mask`, `Size`, `Io`) exit 2, `Budget` exits 3 and
/// `Numeric` exits 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input exceeds a structural size cap (vertex/edge limits, solver caps).
    #[error("size cap exceeded: {0}")]
    Size(String),

    /// Work estimate exceeds the configured compute budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A numerical routine failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A statistic touched an edge whose state is hidden by the mask.
    #[error("mask violation: {0}")]
    Mask(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed text input (graph files, pattern files).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
