use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("p must be an odd prime (got {0})")]
    EvenPrime(u64),
    #[error("k = {k} does not divide p - 1 = {p_minus_1}")]
    NotDivisor { k: u64, p_minus_1: u64 },
    #[error("residue must be nonzero mod {0}")]
    ZeroResidue(u64),
    #[error("sets live over different fields (p = {left} vs p = {right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("invalid progression: {0}")]
    InvalidGap(String),
    #[error("set size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("cost guard exceeded: {0}")]
    CostGuard(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lemma violated: {0}")]
    Violation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
