use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("simplex {simplex} is missing its face {face}")]
    MissingFace { simplex: String, face: String },
    #[error(
        "face {face} (value {face_value}) appears after its cofacet {simplex} (value {value})"
    )]
    Monotonicity {
        simplex: String,
        value: f64,
        face: String,
        face_value: f64,
    },
    #[error("duplicate simplex {0}")]
    DuplicateSimplex(String),
    #[error("cochain restricted to the filtration value {0} is not a cocycle")]
    NotCocycle(f64),
    #[error("bar index {0} does not belong to this barcode")]
    UnknownBar(usize),
    #[error("codomain mismatch: {0}")]
    Codomain(String),
    #[error("flag dimension is not non-increasing: {0}")]
    NotNonIncreasing(String),
    /// An invariant that must hold by construction was violated.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;
