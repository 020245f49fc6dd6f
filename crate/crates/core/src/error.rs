use thiserror::Error;

/// Library-wide error type. Every failure is a hard error; nothing degrades
/// to an approximation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("scalar context mismatch: m={0} vs m={1}")]
    ContextMismatch(u32, u32),
    #[error("not a permutation: {0}")]
    BadPerm(String),
    #[error("invalid block partition: {0}")]
    BadBlocks(String),
    #[error("element does not lie in the Levi subgroup")]
    NotInLevi,
    #[error("element is not admissible for the Drinfeld coweight")]
    NotAdmissible,
    #[error("coweight is not dominant for this context: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("vector is not a standard basis vector of any block")]
    NotOrbitVector,
    #[error("element is not central")]
    NotCentral,
    #[error("scalar is not invertible: {0}")]
    NotInvertible(String),
    #[error("basis expansion failed: {0}")]
    ExpansionFailed(String),
    #[error("word does not multiply to the requested element")]
    WordMismatch,
    #[error("Laurent polynomial has odd v-exponent {0}; cannot specialize v^2")]
    OddExponent(i64),
    #[error("not invariant under the declared symmetry group")]
    NotSymmetric,
    #[error("measure normalization mismatch: {0} vs {1}")]
    MeasureMismatch(&'static str, &'static str),
    #[error("character exponent {0} out of range mod {1}")]
    BadCharacter(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size guard: {what} = {actual} exceeds {limit} (pass force=true to override)")]
    SizeGuard {
        what: &'static str,
        actual: u64,
        limit: u64,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
