use std::io;

/// Errors produced by the Krylov routines in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input vector is zero")]
    ZeroVector,

    #[error("{operation} did not converge within {iterations} iterations")]
    NotConverged {
        operation: &'static str,
        iterations: usize,
    },

    #[error("{operation}: nonpositive pivot {pivot:e} at index {index}")]
    NonPositivePivot {
        operation: &'static str,
        index: usize,
        pivot: f64,
    },

    #[error("{operation}: matrix is numerically singular")]
    Singular { operation: &'static str },

    #[error("function is undefined or non-finite at {at:e}")]
    FunctionUndefined { at: f64 },

    #[error("recurrence too short: need {needed} Lanczos steps, have {available}")]
    RecurrenceTooShort { needed: usize, available: usize },

    #[error("denominator root {root} lies on the spectrum interval endpoint")]
    RootAtEndpoint { root: f64 },

    #[error("stream protocol violation: {0}")]
    Stream(String),

    #[error("coincident interpolation nodes {0:e} and {1:e}")]
    CoincidentNodes(f64, f64),

    #[error("term {index}: {source}")]
    Term {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures that come from the arithmetic (pivots, eigensolvers,
    /// undefined functions) rather than from configuration or I/O.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NotConverged { .. }
            | Error::NonPositivePivot { .. }
            | Error::Singular { .. }
            | Error::FunctionUndefined { .. }
            | Error::CoincidentNodes(..) => true,
            Error::Term { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
