use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzError {
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("data length {len} does not match a {rows}x{cols} matrix")]
    DataLength { rows: usize, cols: usize, len: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("tolerances must be strictly positive")]
    InvalidTolerance,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("partition is empty")]
    EmptyPartition,

    #[error("{what} is not unitary (residual {residual:e})")]
    NotUnitary { what: &'static str, residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NegativeEigenvalue(f64),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("operation needs an irreducible input, got partition {0:?}")]
    Reducible(Vec<usize>),

    #[error("input is not a GRVV solution (residual {0:e})")]
    NotGrvv(f64),

    #[error("representation is not in canonical block form (residual {0:e})")]
    NotCanonical(f64),

    #[error("no scale/convention pair closes the superalgebra (best residual {0:e})")]
    NoClosure(f64),

    #[error("reconstruction residual {0:e} above tolerance")]
    Reconstruction(f64),

    #[error("point lies on the excluded pole: {0}")]
    Singular(&'static str),

    #[error("input is not unit norm (norm {0})")]
    NotUnit(f64),

    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),

    #[error("size {n} exceeds the dense limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FuzzError>;
