//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("polynomial must be monic: {0}")]
    NotMonic(String),
    #[error("polynomial must be nonconstant: {0}")]
    ConstantPolynomial(String),
    #[error("degree {0} beyond supported bound {1}")]
    DegreeBound(usize, usize),
    #[error("infinite value not divisible")]
    InfiniteValue,
    #[error("not an augmentation: gamma {gamma} does not exceed mu(phi) = {current}")]
    NotAugmentation { gamma: String, current: String },
    #[error("{0} rejected by the key polynomial test")]
    KeyRejected(String),
    #[error("key test undecided for {0} at the given bounds; pass a trust flag to override")]
    KeyUndecided(String),
    #[error("{0} is not an accepted key polynomial here")]
    KeyNotAccepted(String),
    #[error("{0} is not an abstract key polynomial for this valuation")]
    NotAbstractKey(String),
    #[error("chains are over different primes: {0} vs {1}")]
    MismatchedPrimes(u64, u64),
    #[error("operation not supported on a limit-augmented chain")]
    LimitChain,
    #[error("gamma {gamma} does not exceed every scanned value (index {index}: {value})")]
    LimitGamma {
        gamma: String,
        index: usize,
        value: String,
    },
    #[error("family index {0} out of range (family has {1} chains)")]
    FamilyIndex(usize, usize),
    #[error("family is not strictly increasing: indices {0} < {1}")]
    FamilyNotIncreasing(usize, usize),
    #[error("scan cap {0} exceeds the supported bound {1} for this family law")]
    FamilyCap(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
