use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} is infeasible: about {estimate:.3e} units of work, limit {limit:.3e}")]
    Infeasible {
        what: &'static str,
        estimate: f64,
        limit: f64,
    },

    #[error("continued fraction depth too small: no convergent brackets N = {n}")]
    DepthTooSmall { n: u64 },

    #[error("inequality check failed: {0}")]
    BoundViolated(String),

    #[error("cannot parse frequency descriptor `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("eigensolver residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Eigen { residual: f64, tolerance: f64 },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
