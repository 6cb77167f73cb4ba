use thiserror::Error;

/// Errors produced by constructors, composition, parsing and table lookups.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image {value} at position {index} is out of range for codomain {cod}")]
    ImageOutOfRange {
        index: usize,
        value: usize,
        cod: usize,
    },

    #[error("cannot compose: left codomain {lhs_cod} != right domain {rhs_dom}")]
    ComposeMismatch { lhs_cod: usize, rhs_dom: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid tree morphism: {0}")]
    InvalidMorphism(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("invalid operad data: {0}")]
    InvalidOperad(String),

    #[error("invalid expression: {0}")]
    InvalidExpression(String),

    #[error("missing multiplication table entry: {0}")]
    MissingTable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
