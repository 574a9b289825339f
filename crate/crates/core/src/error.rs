//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by estimation, fitting and simulation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution or configuration parameter is outside its valid range.
    InvalidParameter(String),
    /// An argument is outside the domain of the operation (e.g. a
    /// probability outside `(0, 1)` or an empty sample).
    Domain(String),
    /// The requested method cannot be applied to the given input
    /// (e.g. linear interpolation on a table without bin means).
    UnsupportedMethod(String),
    /// A nonlinear fit failed to produce a valid candidate; carries
    /// diagnostics of the best invalid one.
    FitFailure(String),
    /// A transfer plan cannot be funded (tax rate at or above one).
    Infeasible(String),
    /// Too many bootstrap replicates failed to refit.
    TooManyFailures { failed: usize, total: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnsupportedMethod(msg) => write!(f, "unsupported method: {msg}"),
            Error::FitFailure(msg) => write!(f, "fit failure: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::TooManyFailures { failed, total } => {
                write!(f, "too many replicate failures: {failed} of {total}")
            }
        }
    }
}

impl core::error::Error for Error {}
