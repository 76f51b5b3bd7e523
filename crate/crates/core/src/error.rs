use thiserror::Error;

/// Errors raised by the constructions and numerical checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("tolerance not met: requested {requested:e}, achieved {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },
    #[error("series truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("grid too short: got {got} points, need at least {need}")]
    GridTooShort { got: usize, need: usize },
    #[error("divergent integral: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
