use thiserror::Error;

/// Errors shared across the whole library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a unit modulo {1}")]
    NotUnit(u64, u64),
    #[error("p = {0} divides a_p; no unit root exists")]
    NotOrdinary(u64),
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("joint eigenspace has dimension {0}, expected 1")]
    AmbiguousEigensystem(usize),
    #[error("no rational eigenvector for the requested eigensystem")]
    NonRational,
    #[error("polynomial degree {0} exceeds k-2 = {1}")]
    DegreeTooLarge(usize, usize),
    #[error("bad reduction at {0} not supported for this model")]
    BadReductionUnsupported(u64),
    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),
    #[error("modulus {0} is incompatible with p = {1}")]
    BadModulus(u64, u64),
    #[error("{0} is not square-free over the given primes")]
    NotSquareFree(u64),
    #[error("{0} is not a primitive root modulo {1}")]
    NotPrimitiveRoot(u64, u64),
    #[error("p = {0} is not admissible here: {1}")]
    BadPrime(u64, String),
    #[error("need at least two consecutive levels, got {0}")]
    InsufficientLevels(usize),
    #[error("a_p = {0} is nonzero; plus/minus decomposition needs a_p = 0")]
    NotSupersingularZero(i64),
    #[error("weight {0} is odd; this operation needs even weight")]
    WeightParity(u32),
    #[error("modulus {0} shares a factor with the level {1}")]
    GcdViolation(u64, u64),
    #[error("{0} is not a Kolyvagin prime for this form")]
    NotKolyvagin(u64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
    #[error("requested precision unreachable: {0}")]
    PrecisionUnreachable(String),
    #[error("curve is singular (discriminant zero)")]
    SingularCurve,
    #[error("inconsistent form data: {0}")]
    InconsistentModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
