use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ambient dimension {0} is not supported (1..=32)")]
    UnsupportedDimension(usize),

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("derivation has no definite parity")]
    MixedParity,

    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("quadratic form is degenerate")]
    DegenerateForm,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("denominator must be a nonzero polynomial in the even variables")]
    BadDenominator,

    #[error("field is not in DH(omega): defect {defect} is not proportional to omega")]
    NotInDh { defect: String },

    #[error("derivation does not preserve the ideal generated by omega: {witness}")]
    IdealNotPreserved { witness: String },

    #[error("quadric reduction needs a nonzero coefficient of x{0}^2; change basis first")]
    NoLeadingSquare(usize),

    #[error("chart {chart}: {msg}")]
    Chart { chart: usize, msg: String },
}
