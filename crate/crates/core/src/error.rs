use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Variant names are part of the CLI
/// contract: `dw` prints [`Error::name`] on exit status 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("characteristic polynomial has a non-integer root: {0}")]
    NonIntegerRoot(String),

    #[error("characteristic polynomial has a repeated root: {0}")]
    RepeatedRoot(String),

    #[error("reconstruction disagrees with the sequence at index {index}")]
    InconsistentTail { index: usize },

    #[error("recurrence order {order} exceeds the class budget {max}")]
    BudgetExceeded { order: usize, max: usize },

    #[error("declared coordinate bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("inconsistent matching across rays: {0}")]
    InconsistentMatching(String),

    #[error("recovered class {0} is not an integral lift of w2")]
    CharacteristicViolation(String),

    #[error("recovered series fails verification: {0}")]
    VerificationFailed(String),

    #[error("series has no terms")]
    EmptySeries,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("q(tS) = {0} is not positive; logarithm undefined")]
    NonPositiveValue(String),

    #[error("floating-point overflow: exponent {0} is out of range")]
    Overflow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("table is not of simple type: {0}")]
    SimpleTypeViolation(String),

    #[error("b=0 and b=1 routes disagree: {0}")]
    InconsistentRoutes(String),

    #[error("nonzero table entry in a forbidden degree: {0}")]
    DegreeParity(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("oracle has no data for ray {0}")]
    MissingRay(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Stable diagnostic name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InsufficientData(_) => "InsufficientData",
            Error::NonIntegerRoot(_) => "NonIntegerRoot",
            Error::RepeatedRoot(_) => "RepeatedRoot",
            Error::InconsistentTail { .. } => "InconsistentTail",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::InconsistentMatching(_) => "InconsistentMatching",
            Error::CharacteristicViolation(_) => "CharacteristicViolation",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::EmptySeries => "EmptySeries",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NonPositiveValue(_) => "NonPositiveValue",
            Error::Overflow(_) => "Overflow",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::UnknownEntry(_) => "UnknownEntry",
            Error::SimpleTypeViolation(_) => "SimpleTypeViolation",
            Error::InconsistentRoutes(_) => "InconsistentRoutes",
            Error::DegreeParity(_) => "DegreeParity",
            Error::Parse { .. } => "ParseError",
            Error::MissingRay(_) => "MissingRay",
            Error::Format(_) => "FormatError",
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
