use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A hypothesis required by the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed text input (expression, distribution spec, decimal string, config).
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    /// A function was evaluated where it is not smooth or not defined.
    #[error("evaluation error at x = {x}: {message}")]
    Evaluation { x: f64, message: String },

    /// Adaptive quadrature failed to reach its tolerance.
    #[error("quadrature did not converge on [{a}, {b}]: estimated error {error:e} after {intervals} intervals")]
    Quadrature {
        a: f64,
        b: f64,
        error: f64,
        intervals: usize,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(position: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: msg.into(),
        }
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Quadrature { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
