use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Expected control flow (a support candidate that does not extend, a
/// countermeasure rejecting an injection) is modelled with values, not
/// with this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field degree m = {0} (need 1 <= m <= 16)")]
    InvalidField(u32),
    #[error("modulus {modulus:#x} does not match the fixed modulus {expected:#x} for m = {m}")]
    ModulusMismatch { m: u32, modulus: u32, expected: u32 },
    #[error("field elements belong to different fields")]
    ContextMismatch,
    #[error("value {0:#x} is not an element of the field")]
    ElementOutOfRange(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("support elements are not pairwise distinct")]
    SupportNotDistinct,
    #[error("Goppa polynomial vanishes at support element {0}")]
    GoppaRoot(usize),
    #[error("syndrome is zero")]
    ZeroSyndrome,
    #[error("decoding failed: {0}")]
    DecodeFailure(String),
    #[error("plaintext weight {got} violates the required weight {expected}")]
    WeightViolation { expected: usize, got: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("scaling factor must be nonzero")]
    ZeroScalar,
    #[error("word has weight zero")]
    ZeroWord,
    #[error("faulty output has fewer than two roots")]
    TooFewRoots,
    #[error("injection budget exhausted after {0} injections")]
    BudgetExceeded(u64),
    #[error("no quadratic equation available to anchor the normalizer")]
    NoQuadraticAnchor,
    #[error("linear fault equations are inconsistent")]
    InconsistentLinear,
    #[error("reduced system has {vars} free variables, above the cap of {cap}")]
    SolverOverflow { vars: usize, cap: usize },
    #[error("all {0} support candidates failed to extend")]
    Exhausted(usize),
    #[error("unsupported injection shape: {0}")]
    UnsupportedShape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("operation requires a transparent oracle")]
    NotTransparent,
    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::ModulusMismatch { .. } => "ModulusMismatch",
            Error::ContextMismatch => "ContextMismatch",
            Error::ElementOutOfRange(_) => "ElementOutOfRange",
            Error::ZeroInverse => "ZeroInverse",
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::BothZero => "BothZero",
            Error::NotInvertible => "NotInvertible",
            Error::ParameterViolation(_) => "ParameterViolation",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::SupportNotDistinct => "SupportNotDistinct",
            Error::GoppaRoot(_) => "GoppaRoot",
            Error::ZeroSyndrome => "ZeroSyndrome",
            Error::DecodeFailure(_) => "DecodeFailure",
            Error::WeightViolation { .. } => "WeightViolation",
            Error::Inconsistent => "Inconsistent",
            Error::ZeroScalar => "ZeroScalar",
            Error::ZeroWord => "ZeroWord",
            Error::TooFewRoots => "TooFewRoots",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NoQuadraticAnchor => "NoQuadraticAnchor",
            Error::InconsistentLinear => "InconsistentLinear",
            Error::SolverOverflow { .. } => "SolverOverflow",
            Error::Exhausted(_) => "Exhausted",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::Precondition(_) => "Precondition",
            Error::NotTransparent => "NotTransparent",
            Error::Format(_) => "Format",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
