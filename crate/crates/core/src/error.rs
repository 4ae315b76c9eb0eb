//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("denominator vanishes at the specialization point: {0}")]
    DenominatorVanishes(String),

    #[error("unknown presentation `{0}` (expected gl2h, sl2h or su2h)")]
    UnknownPresentation(String),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("no annihilating polynomial found up to degree {cap}")]
    DegreeCapExceeded { cap: usize },

    #[error("degenerate discriminant: h^2 - 4*al vanishes")]
    DegenerateDiscriminant,

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("spectrum degenerate at the specialization: {0}")]
    DegenerateAtSpecialization(String),

    #[error("matrix trace does not reduce to a scalar; residual: {0}")]
    NonScalarTrace(String),

    #[error("specialization incompatible with the representation: {0}")]
    SpecializationMismatch(String),

    #[error("irreducible component has no classical counterpart: {0}")]
    PatternMismatch(String),

    #[error("scalar involves the square root s; not in the s-free subfield")]
    NotSFree,

    #[error("invalid specialization: {0}")]
    InvalidSpecialization(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
