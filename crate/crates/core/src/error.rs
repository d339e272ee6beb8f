use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("bad characteristic {characteristic}: {reason}")]
    BadCharacteristic { characteristic: u64, reason: String },
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("algebra is not presented by a single generator")]
    NotMonogenic,
    #[error("multiplication table fails associativity on basis triple ({0}, {1}, {2})")]
    AssociativityFailure(usize, usize, usize),
    #[error("subalgebra is not a free direct summand: {0}")]
    NotFree(String),
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error("solution family has {found} parameters, expected {expected}")]
    SolutionSpaceDimensionMismatch { expected: usize, found: usize },
    #[error("pin is inconsistent with the constraint system: {0}")]
    InconsistentPin(String),
    #[error("characteristic {characteristic} must exceed {d}")]
    CharTooSmall { characteristic: u64, d: usize },
    #[error("forms are not compatible modulo q: {0}")]
    IncompatiblePair(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("enumeration would visit {0} candidates, above the limit")]
    EnumerationTooLarge(u128),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
