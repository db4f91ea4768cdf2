use thiserror::Error;

use crate::chambers::Family;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least {min} for family {family}, got {n}")]
    DimensionTooSmall { family: Family, n: usize, min: usize },

    #[error("face lattice not implemented for D")]
    FaceLatticeUnavailable,

    #[error("invalid face index {ls:?} for {family}, n = {n}: {reason}")]
    InvalidFace {
        family: Family,
        n: usize,
        ls: Vec<usize>,
        reason: &'static str,
    },

    #[error("face dimension {k} out of range 0..={n}")]
    FaceDimensionOutOfRange { k: usize, n: usize },

    #[error("no internal angle supplied for face {0}")]
    MissingFace(String),

    #[error("input length {got} does not match dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("input is empty")]
    EmptyInput,

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("weights must be positive and finite (position {0})")]
    BadWeight(usize),

    #[error("brute-force projection limited to n <= {max}, got {n}")]
    TooLargeForBruteForce { n: usize, max: usize },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("exact law sums to {0}, expected 1")]
    LawNotNormalized(String),

    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: u64, got: u64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
