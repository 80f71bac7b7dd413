use thiserror::Error;

use crate::lattice::Space;

/// Errors raised by construction and by decision procedures.
///
/// Verdicts (`Accept`/`Reject`/`Undecidable`, `True`/`FalseAt`, ...) are not
/// errors: they are answers. An `Error` means the question itself was
/// malformed (mixed spaces, bad indices, violated preconditions) or falls
/// outside what the engine can decide exactly.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mixed-space operation: {left} vs {right}")]
    MixedSpace { left: Space, right: Space },

    #[error("{op}: unsupported space {space}")]
    UnsupportedSpace { op: &'static str, space: Space },

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("net index must be >= 1")]
    IndexZero,

    #[error("{op}: index arity mismatch (single vs product index)")]
    IndexArity { op: &'static str },

    #[error("{op}: undecidable net class `{kind}`")]
    UndecidableClass { op: &'static str, kind: String },

    #[error("{op}: unsupported combination: {detail}")]
    UnsupportedCombination { op: &'static str, detail: String },

    #[error("{op}: precondition failed: {detail}")]
    Precondition { op: &'static str, detail: String },

    #[error("{op}: convergence `{conv}` lacks required capability `{required}`")]
    CapabilityMismatch {
        op: &'static str,
        required: &'static str,
        conv: String,
    },

    #[error("operator entry at row {row}, column {col} is negative")]
    PositivityRequired { row: usize, col: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
