//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid ball: {0}")]
    InvalidOval(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid shape parameters: {0}")]
    InvalidShape(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bead at parameter {param} meets the curve elsewhere")]
    VirtualOnly { param: f64 },

    #[error("beads have different scales ({0} vs {1})")]
    MismatchedLambda(f64, f64),

    #[error("no admissible bead position after parameter {param} before wrapping")]
    Stalled { param: f64 },

    #[error("offset chain has global self-intersections near parameter {param}; sliding is blocked")]
    GalleryDetected { param: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
