use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Budget exhaustion and extension-depth failures are recoverable: callers
/// that produce verdicts map them to `INCONCLUSIVE` instead of guessing.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial not allowed here")]
    ZeroInput,
    #[error("polynomial is not irreducible over Q")]
    NotIrreducible,
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("scalars belong to different extension fields")]
    MixedFields,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("variable count mismatch: expected {expected}, got {got}")]
    WrongVariableCount { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("generators do not all vanish at the origin")]
    GermNotAtOrigin,
    #[error("linear change of coordinates is not invertible")]
    NonInvertibleChange,
    #[error("an extension tower of depth > 1 would be required")]
    ExtensionTooDeep,
    #[error("no separating linear form found for point extraction")]
    ShapePositionFailed,
    #[error("Groebner step budget exhausted")]
    BudgetExhausted,
    #[error("truncation order {got} is below the minimum {needed} for this branch")]
    TruncationTooLow { needed: usize, got: usize },
    #[error("input defines a non-reduced germ")]
    NonReduced,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
