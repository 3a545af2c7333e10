use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{given} vectors given but they span only {rank} dimensions")]
    DependentVectors { given: usize, rank: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("singular change-of-basis matrix")]
    SingularBasis,

    #[error("operator does not respect the grading: {0}")]
    GradingViolation(String),

    #[error("variable sets differ")]
    VariableMismatch,

    #[error("input is not monogenic")]
    NotMonogenic,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("highest weight is not dominant")]
    NotDominant,

    /// A result that the underlying mathematics guarantees did not come out.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
