//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors produced by evaluators, the word algebra, and the identity registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input violates a documented precondition.
    Domain(String),
    /// Invalid precision configuration.
    Precision(String),
    /// A truncation tail could not be certified.
    TailBound(String),
    /// The adaptive summation cap was reached before the tail certificate
    /// dropped below the target tolerance.
    TruncationCap { terms: u64 },
    /// Symbolic and concrete weights were mixed in one expression.
    MixedWeightMode,
    /// Numeric evaluation was requested for a symbolic-weight expression.
    SymbolicEvaluation,
    /// The identity id is not present in the registry.
    UnknownIdentity(String),
    /// A parameter binding lies outside an identity's declared domain.
    OutOfDomain {
        /// Offending parameter name.
        param: String,
        /// The violated constraint, as documented by the registry entry.
        constraint: String,
    },
    /// A non-finite intermediate value (overflow, NaN, allocation failure).
    Numeric(String),
    /// Malformed textual input (series specs, letters, numbers).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Precision(msg) => write!(f, "precision error: {msg}"),
            Error::TailBound(msg) => write!(f, "tail bound not certifiable: {msg}"),
            Error::TruncationCap { terms } => {
                write!(f, "truncation cap of {terms} terms exceeded before convergence")
            }
            Error::MixedWeightMode => write!(f, "symbolic and concrete weights cannot be mixed"),
            Error::SymbolicEvaluation => {
                write!(f, "numeric evaluation requires concrete weights")
            }
            Error::UnknownIdentity(id) => write!(f, "unknown identity id: {id}"),
            Error::OutOfDomain { param, constraint } => {
                write!(f, "parameter `{param}` out of domain: requires {constraint}")
            }
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
