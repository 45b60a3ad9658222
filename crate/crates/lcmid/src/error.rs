//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants distinguish between bad inputs (shapes, normalizations,
/// out-of-range values), violated model assumptions (finiteness,
/// positivity), and resource caps that turn an exact computation into an
/// explicit refusal rather than a silent approximation.
#[derive(Debug, Error)]
pub enum Error {
    /// A model specification or parameter block is internally inconsistent.
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    /// Two inputs that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A score or coefficient is NaN or infinite (finiteness assumption violated).
    #[error("finiteness assumption violated: {0}")]
    NonFinite(String),

    /// A probability that must be strictly positive is zero or negative
    /// (positivity assumption violated).
    #[error("positivity assumption violated: {0}")]
    NonPositiveProbability(String),

    /// A configurable resource cap was exceeded; the computation was not
    /// attempted. The caller should either raise the cap or accept an
    /// inconclusive verdict.
    #[error("cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: u64 },

    /// Conditional response logits vary within a masked attribute profile,
    /// so no attribute-effect decomposition reproduces them.
    #[error("not G-DINA representable: {0}")]
    NotGdinaRepresentable(String),

    /// The requested scaling constant pushes a probability out of (0,1).
    #[error("E out of admissible neighborhood: {0}")]
    InadmissibleScaling(String),

    /// No class pair can be mixed without changing the response distribution.
    #[error("no mixable class pair: {0}")]
    NoMixablePair(String),

    /// A file failed to parse; carries a location when one is known.
    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
