//! Error taxonomy shared by every module of the library.

/// Library-wide error type.
///
/// Every fallible operation names the violated constraint in its message so
/// that callers (and the CLI) can surface actionable diagnostics.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A weight/domain parameter violates its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A point lies outside the domain required by the operation.
    #[error("domain violation: {0}")]
    DomainViolation(String),
    /// Evaluation would touch a singular locus (boundary with negative
    /// exponent, difference quotient at a coordinate axis, ...).
    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),
    /// A basis or expansion index is outside its admissible range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    /// A quadrature rule is too coarse for the requested degree.
    #[error("quadrature underresolved: {0}")]
    QuadratureUnderresolved(String),
    /// A sample set carries no information (e.g. all values vanish).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    /// A cutoff function violates its support/plateau contract.
    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),
    /// An iterative solver failed to converge.
    #[error("failure to converge: {0}")]
    FailureToConverge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
