//! Error type shared by all modules.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors reported by constructors and operations.
///
/// `Capacity` means a requested object would exceed a configured size cap;
/// everything else is a domain error (invalid input for the operation).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A dimension or sample count exceeds the configured cap.
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
    },
    /// Vector expected to be normalized is not.
    NotNormalized { norm: f64 },
    /// Matrix expected to be Hermitian is not.
    NotHermitian { residual: f64 },
    /// Operator expected to be positive has a too-negative eigenvalue.
    NotPositive { min_eigenvalue: f64 },
    /// Operator expected to have unit trace does not.
    TraceNotOne { trace: f64 },
    /// Matrix expected to be an orthogonal projector is not.
    NotProjector { residual: f64 },
    /// Operands live on different sectors / table shapes.
    ShapeMismatch { expected: &'static str },
    /// Generic precondition violation, described by `what`.
    Domain { what: &'static str },
    /// A numeric parameter is out of its admissible range.
    OutOfRange {
        what: &'static str,
        value: f64,
    },
    /// Monte Carlo / optimization refusal with a diagnostic.
    Refusal { what: &'static str, diagnostic: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity { what, required, cap } => {
                write!(f, "capacity exceeded for {what}: required {required} > cap {cap}")
            }
            Error::NotNormalized { norm } => {
                write!(f, "vector is not normalized (norm = {norm})")
            }
            Error::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (residual = {residual:e})")
            }
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "operator is not positive (min eigenvalue = {min_eigenvalue:e})")
            }
            Error::TraceNotOne { trace } => write!(f, "trace is not 1 (trace = {trace})"),
            Error::NotProjector { residual } => {
                write!(f, "matrix is not an orthogonal projector (residual = {residual:e})")
            }
            Error::ShapeMismatch { expected } => write!(f, "shape mismatch: expected {expected}"),
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::OutOfRange { what, value } => {
                write!(f, "parameter out of range: {what} = {value}")
            }
            Error::Refusal { what, diagnostic } => {
                write!(f, "refusal: {what} (diagnostic = {diagnostic})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
