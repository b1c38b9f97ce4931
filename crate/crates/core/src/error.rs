use thiserror::Error;

/// Errors raised by distribution, box, game and bound operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("invalid stochastic matrix: {0}")]
    Matrix(String),
    #[error("distribution not normalized: {0}")]
    Normalization(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("wiring mismatch: {0}")]
    Wiring(String),
    #[error("enumeration too large: {0}")]
    Resource(String),
    #[error("infeasible bias vector: {0}")]
    Infeasible(String),
    #[error("cannot build box: {0}")]
    Construction(String),
    #[error("incomplete report: {0}")]
    Report(String),
    #[error("entropic chain needs classical systems; strategy uses non-classical resources")]
    ChainNotApplicable,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
