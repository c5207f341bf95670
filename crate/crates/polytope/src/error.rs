//! Error type shared by the whole crate.
//!
//! Overflow and capacity conditions are first-class errors: the analysis
//! routines promise exact results, so any arithmetic that would exceed the
//! configured integer width aborts with [`Error::Overflow`] rather than
//! wrapping.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Integer arithmetic exceeded the configured width.
    #[error("integer overflow in {op}; rebuild with wider integer types")]
    Overflow { op: &'static str },

    /// A compile-time capacity limit was exceeded.  The message format names
    /// the limit so the remedy is obvious.
    #[error("Please increase {param} to at least {needed}")]
    Capacity { param: &'static str, needed: usize },

    /// Malformed input text.
    #[error("parse error: {msg}")]
    Parse { msg: String },

    /// The input points span a proper subspace; the offending hyperplane
    /// equations are carried for display.
    #[error("points span a {rank}-dimensional sublattice of {dim}-space")]
    NotFullDim {
        rank: usize,
        dim: usize,
        /// Equations `a.x + c = 0` satisfied by all points, flattened rows of
        /// length `dim + 1` with the constant last.
        eqs: Vec<Vec<i64>>,
    },

    /// The origin is not strictly interior to the polytope.
    #[error("the origin is not in the interior of the polytope")]
    NoInteriorPoint,

    /// A routine that requires a reflexive polytope received a non-reflexive
    /// one.
    #[error("the polytope is not reflexive")]
    NotReflexive,

    /// A combined weight system failed a structural requirement.
    #[error("invalid weight system: {msg}")]
    BadWeights { msg: String },

    /// Two independently computed quantities that must agree did not.
    #[error("cross-check failed: {msg}")]
    CrossCheck { msg: String },

    /// An internal invariant was violated; indicates a bug, not bad input.
    #[error("internal error: {msg}")]
    Internal { msg: String },

    /// Feature combination that is recognized but deliberately not supported.
    #[error("unsupported: {msg}")]
    Unsupported { msg: String },

    /// Underlying I/O failure, carried as text to keep the type cloneable.
    #[error("io error: {msg}")]
    Io { msg: String },
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse { msg: msg.into() }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal { msg: msg.into() }
    }

    pub fn bad_weights(msg: impl Into<String>) -> Self {
        Error::BadWeights { msg: msg.into() }
    }

    pub fn cross_check(msg: impl Into<String>) -> Self {
        Error::CrossCheck { msg: msg.into() }
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported { msg: msg.into() }
    }

    /// Process exit code for the CLI front ends: 2 bad input, 3 overflow,
    /// 4 capacity limit, 1 anything else (0 is success).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::BadWeights { .. } => 2,
            Error::Overflow { .. } => 3,
            Error::Capacity { .. } => 4,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io { msg: e.to_string() }
    }
}
