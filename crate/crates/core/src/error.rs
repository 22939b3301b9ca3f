use thiserror::Error;

/// Errors raised by the analytic and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument outside the domain of {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("{op} is not defined for {model}")]
    Unsupported { op: &'static str, model: String },

    #[error("moment-matching system is degenerate: {0}")]
    DegenerateMoments(String),

    #[error(
        "quadrature did not reach tolerance: estimate {estimate:e}, error {abs_error:e}, target {target:e}"
    )]
    Quadrature {
        estimate: f64,
        abs_error: f64,
        target: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        op,
        reason: reason.into(),
    }
}
