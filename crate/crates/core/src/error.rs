use thiserror::Error;

use crate::zerofinder::Zero;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("operands use different frequency bases")]
    BasisMismatch,

    /// Two distinct frequency vectors evaluate to the same real number, which
    /// means the declared basis is not linearly independent over the rationals.
    #[error("distinct frequencies {0} and {1} have the same numeric value; basis is not independent")]
    FrequencyTie(String, String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("contour passes too close to a zero (relative |f| = {0:.3e})")]
    ContourTooClose(f64),

    #[error("contour runs through a zero or the integrand is not finite")]
    ContourOnZero,

    #[error("semigroup search exhausted its budget of {0} node expansions")]
    BudgetExhausted(u64),

    #[error("subdivision depth exceeded; {} zeros located before giving up", partial.len())]
    DepthExceeded { partial: Vec<Zero> },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Errors caused by malformed or out-of-contract input, as opposed to
    /// numerical breakdowns.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::BasisMismatch | Error::FrequencyTie(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
