use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("no convergence after {iterations} iterations: {reason}")]
    NoConvergence {
        iterations: usize,
        reason: String,
        last: Vec<f64>,
    },
    #[error("size budget exceeded: {what} needs {size}, cap is {cap}")]
    Budget { what: String, size: u128, cap: u128 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent basis: remainder {0} below -1e-9")]
    InconsistentBasis(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("not needed: {0}")]
    NotNeeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
