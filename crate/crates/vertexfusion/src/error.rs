use std::fmt;

/// Errors shared across the crate.
///
/// Mathematical assertion failures are not errors: checkers return `bool`
/// (with witnesses where useful). An `Error` means the requested computation
/// itself is ill-posed or leaves the truncation window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in the base field.
    DivisionByZero,
    /// A matrix that must be invertible is singular.
    SingularMatrix,
    /// Dimension or shape mismatch between operands.
    DimensionMismatch(String),
    /// The requested value lies outside the validity window of a truncated
    /// object. Distinct from zero.
    OutOfWindow(String),
    /// A sum that must terminate inside the window did not.
    NonTerminating(String),
    /// Structurally invalid input (bad weights, bad tables, bad config).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            Error::OutOfWindow(s) => write!(f, "out of window: {s}"),
            Error::NonTerminating(s) => write!(f, "non-terminating sum: {s}"),
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
