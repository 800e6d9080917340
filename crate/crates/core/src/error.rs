//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the exact computation kernels.
///
/// Resource-style failures ([`Error::ResourceLimit`], [`Error::SizeGuard`],
/// [`Error::ExponentOverflow`]) are always explicit: a computation either
/// returns an exact answer or one of these, never a truncated result.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NonPrime(u64),

    #[error("invalid variable set: {0}")]
    InvalidVariables(String),

    #[error("ring context mismatch")]
    ContextMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("exponent overflow while forming a Frobenius power")]
    ExponentOverflow,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("operator rank {required} exceeds the size guard {cap}")]
    SizeGuard { required: u128, cap: u64 },

    #[error("operator level mismatch: expected {expected}, got {found}")]
    LevelMismatch { expected: u32, found: u32 },

    #[error("monomial lies outside the level-{e} Frobenius basis")]
    SlotOutOfRange { e: u32 },

    #[error("ideal is not D^({e})-stable")]
    NotDeStable { e: u32 },

    #[error("hypothesis failure: the submodule is not contained in its Frobenius pullback")]
    HypothesisViolation,

    #[error("internal invariant failed: {0}")]
    Internal(String),
}
