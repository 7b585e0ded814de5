//! Error types.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime below 2^31")]
    BadModulus(u64),
    #[error("cannot adjoin the square root of zero")]
    ZeroRadicand,
    #[error("{value} is not a square modulo {p}")]
    NonSquareInPrimeField { p: u64, value: u64 },
    #[error("tower depth limit {limit} exceeded")]
    TowerDepth { limit: usize },
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("generality condition {index} fails: {reason}")]
    Generality { index: usize, reason: String },
    #[error("sampling gave up after {attempts} draws; last failure: {last}")]
    SamplingExhausted { attempts: usize, last: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("input is not generic: {0}")]
    Degenerate(String),
    #[error("tuple is not in the image of the moduli map: {0}")]
    NotInImage(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
