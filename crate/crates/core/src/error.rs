use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("cycle notation: {0}")]
    Parse(String),

    #[error("group has no generators")]
    NoGenerators,

    #[error("group is not transitive")]
    NotTransitive,

    #[error("group is not 2-transitive")]
    NotTwoTransitive,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator {index} is not a member of the group")]
    NotAMember { index: usize },

    #[error("coset index exceeds bound {bound}")]
    IndexTooLarge { bound: usize },

    #[error("{0} is not a prime power of size at most 256")]
    UnsupportedField(u64),

    #[error("family {0} is validated arithmetically only")]
    NotConstructible(String),

    #[error("subgroup search exhausted {attempts} attempts (seed {seed})")]
    SearchExhausted { seed: u64, attempts: u64 },

    #[error("group order {order} exceeds the exhaustive bound {bound}")]
    TooLargeForExhaustive { order: String, bound: u64 },

    #[error("graph is not invariant under generator {index}")]
    NotInvariant { index: usize },

    #[error("graph6: {0}")]
    Graph6(String),
}

pub type Result<T> = std::result::Result<T, Error>;
