use thiserror::Error;

/// Errors raised by field construction, linear algebra, GMT machinery and
/// the permutation constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("modulus must be monic with nonzero degree")]
    NotMonic,
    #[error("degree too small: {0}")]
    DegreeTooSmall(String),
    #[error("field of order {order} exceeds the supported limit {limit}")]
    FieldTooLarge { order: u64, limit: u64 },
    #[error("coefficient {0} out of range")]
    BadCoefficient(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live at different tower levels")]
    LevelMismatch,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("zero input")]
    ZeroInput,
    #[error("value left the base subfield: {0}")]
    InternalSubfieldViolation(String),
    #[error("expected {expected} elements, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("elements are not an F_q-basis")]
    NotABasis,
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("element is not a root of unity of order dividing (q^n-1)/(q-1)")]
    NotInMu,
    #[error("partition check failed: {0}")]
    PartitionViolation(String),
    #[error("r = {r} is not coprime to q-1 = {qm1}")]
    BadR { r: u64, qm1: u64 },
    #[error("the projective map is not a bijection: {0}")]
    NotBijection(String),
    #[error("polynomial does not permute F_q: {0}")]
    NotPermutationOfFq(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("construction requires n = {expected}, field has n = {got}")]
    WrongN { expected: usize, got: usize },
    #[error("zero polynomial")]
    ZeroPoly,
    #[error("polynomial has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
