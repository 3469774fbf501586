use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not ordinary: {0}")]
    NotOrdinary(String),
    #[error("coefficient field does not split mod p^M: {0}")]
    NonSplitField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("weight too small: {0}")]
    WeightTooSmall(String),
    #[error("irreducible factor of degree {0} exceeds the supported bound 4")]
    IrreducibleDegreeTooHigh(usize),
    #[error("could not certify the factorisation of {0}")]
    UncertifiedFactorization(String),
    #[error("not a field: {0}")]
    NotAField(String),
    #[error("division by a non-unit: {0}")]
    DivisionByNonUnit(String),
    #[error("closure violated: {0}")]
    ClosureViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag used in reports and FFI status codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotOrdinary(_) => "NotOrdinary",
            Error::NonSplitField(_) => "NonSplitField",
            Error::RingMismatch(_) => "RingMismatch",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::SingularSystem(_) => "SingularSystem",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::WeightTooSmall(_) => "WeightTooSmall",
            Error::IrreducibleDegreeTooHigh(_) => "IrreducibleDegreeTooHigh",
            Error::UncertifiedFactorization(_) => "UncertifiedFactorization",
            Error::NotAField(_) => "NotAField",
            Error::DivisionByNonUnit(_) => "DivisionByNonUnit",
            Error::ClosureViolation(_) => "ClosureViolation",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
