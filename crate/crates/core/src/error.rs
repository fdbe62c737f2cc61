use thiserror::Error;

use crate::complex::Simplex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed complex document: {0}")]
    Malformed(String),

    #[error("duplicate top simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),

    #[error("mixed top dimensions: expected {expected}, found simplex {simplex:?}")]
    MixedDimension {
        expected: usize,
        simplex: Vec<usize>,
    },

    #[error("complex is not a closed connected pseudomanifold")]
    NotClosed,

    #[error("complex is not orientable: contradictory sign reached at top simplex {0}")]
    NonOrientable(Simplex),

    #[error("complex carries no orientation")]
    Unoriented,

    #[error("supplied orientation is not coherent")]
    IncoherentOrientation,

    #[error("degree {degree} out of range for a complex of dimension {dimension}")]
    DegreeOutOfRange { degree: usize, dimension: usize },

    #[error("dimension {0} is odd; the middle pairing needs even dimension")]
    OddDimension(usize),

    #[error("dimension {0} is not a multiple of 4")]
    NotMultipleOfFour(usize),

    #[error("matrix dimensions do not match: {0}")]
    Shape(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("metric is not positive-definite in degree {0}")]
    NotPositiveDefinite(usize),

    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),

    #[error("integer overflow in sparse matrix arithmetic")]
    Overflow,

    #[error("exact solver failed: {0}")]
    Solver(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
