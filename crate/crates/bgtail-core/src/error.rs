use core::fmt;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    Domain(&'static str),
    /// An iterative scheme (continued fraction, series, adaptive
    /// quadrature) failed to reach its tolerance within its budget.
    Convergence(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Convergence(what) => write!(f, "convergence failure: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
