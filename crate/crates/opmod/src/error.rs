//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid operator space: {0}")]
    InvalidSpace(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("optimizer failed: {0}")]
    Optimizer(String),

    #[error("witness search failed: {0}")]
    WitnessSearch(String),
}
