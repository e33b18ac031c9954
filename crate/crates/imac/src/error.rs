//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix or vector dimensions do not fit the operation.
    InvalidDimension(String),
    /// A value lies outside its mathematical domain (e.g. fine gain not in (1,2]).
    Domain(String),
    /// The channel configuration is outside the regime the operation covers.
    Regime(String),
    /// A combinatorial request cannot be satisfied (e.g. popcount > length).
    Infeasible(String),
    /// An exhaustive or enumerative routine would exceed its size cap.
    TooLarge(String),
    /// Malformed user input (CLI flags, config files).
    InvalidInput(String),
}

impl Error {
    pub fn invalid_dimension(msg: impl Into<String>) -> Self {
        Error::InvalidDimension(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }
    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
    pub fn too_large(msg: impl Into<String>) -> Self {
        Error::TooLarge(msg.into())
    }
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(m) => write!(f, "invalid dimension: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Regime(m) => write!(f, "regime error: {m}"),
            Error::Infeasible(m) => write!(f, "infeasible: {m}"),
            Error::TooLarge(m) => write!(f, "size cap exceeded: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl std::error::Error for Error {}
