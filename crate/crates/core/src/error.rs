use alloc::string::String;

/// Errors raised when an input violates a structural precondition.
///
/// Failed *verifications* are not errors; they are reported as failed
/// [`Check`](crate::Check)s.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {p} is too small (need p >= {min})")]
    PrimeTooSmall { p: u64, min: u64 },

    #[error("group order p^{n} violates n < p - 1 for p = {p}")]
    OrderTooLarge { p: u64, n: u32 },

    #[error("p^m = {p}^{m} does not fit the scalar range")]
    PrecisionTooLarge { p: u64, m: u32 },

    #[error("factor exponents must be positive and non-increasing: {0}")]
    BadFactors(String),

    #[error("element {0} does not belong to the group")]
    NotInGroup(String),

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("{0}! is not invertible modulo p^m")]
    NotInvertible(u64),

    #[error("element {0} is not divisible by p")]
    NotInPA(String),

    #[error("subgroup is not coordinate aligned")]
    NotAligned,

    #[error("group of order {0} is too large to enumerate")]
    TooLarge(u64),

    #[error("{name} is not an ideal: {witness}")]
    NotIdeal { name: String, witness: String },

    #[error("structure constant c[{j}][{k}] -> g{l} is not torsion compatible")]
    Torsion { j: usize, k: usize, l: usize },

    #[error("pre-Lie ring is not left nilpotent: {0}")]
    NotNilpotent(String),

    #[error("inverse series did not converge: {0}")]
    NoConvergence(String),

    #[error("brace is not left nilpotent within n + 1 steps")]
    ChainDidNotTerminate,

    #[error("invalid table: {0}")]
    BadTable(String),
}

pub type Result<T> = core::result::Result<T, Error>;
