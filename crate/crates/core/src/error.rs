use thiserror::Error;

use crate::game::Variant;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid simplex point: {0}")]
    InvalidPoint(String),
    #[error("invalid population: {0}")]
    InvalidPopulation(String),
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
    #[error("not a rest point: max |gradient| = {0:e}")]
    NotRestPoint(f64),
    #[error("operation not defined for variant {0}")]
    UnsupportedVariant(Variant),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot aggregate an empty set of runs")]
    EmptyAggregate,
}

pub type Result<T> = std::result::Result<T, Error>;
