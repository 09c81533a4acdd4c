use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("modulus {0} exceeds the supported bound 2^15")]
    ModulusTooLarge(u64),

    #[error("zero is not a unit")]
    ZeroUnit,

    #[error("rows are not linearly independent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("vertex of length {len} exceeds portrait depth {depth}")]
    DepthExceeded { len: usize, depth: usize },

    #[error("word is not a first-level stabilizer (total a-exponent {0})")]
    NotStabilizer(u64),

    #[error("word contains a syllable outside the expected alphabet: {0}")]
    ForeignSyllable(String),

    #[error("the constant group is excluded from this computation")]
    ConstantUnsupported,

    #[error("{what} not in {set}")]
    Domain { what: String, set: String },

    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
