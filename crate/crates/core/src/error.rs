use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Caller supplied something outside the documented preconditions.
    InvalidInput(String),
    /// A point that must lie in the domain does not.
    OutsideDomain { x: f64, y: f64 },
    /// An iterative method stopped before reaching its tolerance.
    NotConverged { what: &'static str, iterations: usize, residual: f64 },
    /// A factorization or inner solve broke down.
    Breakdown(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Exit-code class for front ends: true when the caller is at fault.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::OutsideDomain { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::OutsideDomain { x, y } => write!(f, "point ({x}, {y}) is not in the domain"),
            Error::NotConverged { what, iterations, residual } => {
                write!(f, "{what} did not converge after {iterations} iterations (residual {residual:e})")
            }
            Error::Breakdown(m) => write!(f, "numerical breakdown: {m}"),
        }
    }
}
