use thiserror::Error;

/// Errors raised by the algebra routines, the parser and the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("grade {grade} is smaller than degree {degree}")]
    GradeTooSmall { grade: usize, degree: usize },
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("numerator and denominator are not coprime")]
    NotCoprime,
    #[error("rational map must have a nonzero numerator and denominator")]
    ZeroMapPart,
    #[error("rational map is constant (numerator and denominator both constant)")]
    ConstantMap,
    #[error("map has degree {0}, a Moebius map is required")]
    NotMobius(usize),
    #[error("degenerate Moebius map (zero determinant)")]
    DegenerateMobius,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is reducible")]
    Reducible,
    #[error("factorization of a degree-{0} polynomial exceeds the search budget")]
    FactorizationTooLarge(usize),
    #[error("operation unsupported over this field: {0}")]
    UnsupportedField(String),
    #[error("vector is not in the kernel")]
    NotInKernel,
    #[error("degree cap {0} exhausted before the kernel was spanned")]
    DegreeCapExceeded(usize),
    #[error("point is not a characteristic value")]
    NotCharacteristicValue,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator {0} is not invertible modulo {1}")]
    NonInvertibleDenominator(String, u64),
    #[error("invalid problem file: {0}")]
    InvalidProblem(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
