use thiserror::Error;

/// Errors raised across the library.
///
/// Variants that read as "this is a bug" (`CoefficientNotInPrimeField`,
/// `NonTermination`) guard internal invariants and should never be observed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields or variable sets")]
    MixedFields,
    #[error("operation requires {0}")]
    WrongField(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("characteristic {char} is too small for degree {degree}")]
    BadCharacteristic { char: u64, degree: u32 },
    #[error("polynomial has degree zero in `{0}`")]
    DegreeZero(String),
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("coefficient of the norm polynomial is not in the prime field")]
    CoefficientNotInPrimeField,
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("no sample points in the open sets for the given primes")]
    EmptySample,
    #[error("enumeration of {needed} subsets exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("denominator divisible by {0}")]
    BadReduction(u64),
    #[error("one side of the bipartite graph is empty")]
    EmptySide,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("point coordinates do not lie in the coefficient field")]
    PointNotRational,
    #[error("iteration cap reached in {0}")]
    NonTermination(&'static str),
    #[error("section is the zero polynomial")]
    ZeroSection,
    #[error("degree {got} exceeds the maximum {max}")]
    DegreeTooHigh { got: u32, max: u32 },
    #[error("characteristic two is not supported here")]
    CharacteristicTwo,
    #[error("wrong dimension: {0}")]
    WrongDimension(String),
    #[error("pullback vanishes identically")]
    ZeroPullback,
    #[error("automorphism does not have the elementary shape: {0}")]
    NotInvertibleShape(String),
    #[error("sample too small: {0}")]
    SampleTooSmall(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
