use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    PrimeNotPrime(u64),
    #[error("operands carry different primes ({0} and {1})")]
    ContextMismatch(u64, u64),
    #[error("residue undefined: valuation {0} is negative")]
    NegativeValuation(i64),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error(
        "presentation does not satisfy the small-cancellation condition needed for Dehn reduction"
    )]
    NotDehnPresentation,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("matrix is singular")]
    SingularMatrix,
    #[error("determinant is {0}, expected 1")]
    DeterminantNotOne(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid vertex literal {0:?}")]
    InvalidVertex(String),

    #[error("element is not elliptic (translation length {0})")]
    NotElliptic(u64),
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("iteration cap exceeded: {0}")]
    IterationCapExceeded(String),

    #[error("trace rewriting exceeded its budget of {0} steps")]
    ReductionCapExceeded(usize),

    #[error("representation is not bounded")]
    NotBounded,
    #[error("lattice saturation did not stabilize within {0} rounds")]
    SaturationCapExceeded(usize),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
