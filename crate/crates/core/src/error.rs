use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable index {index} out of range for {count} variables")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("matrix or change of frame is not invertible")]
    NonInvertible,
    #[error("series is not invertible: {0}")]
    SeriesNotInvertible(String),
    #[error("geometric series does not truncate: {0}")]
    NonconvergentTruncation(String),
    #[error("ambient mismatch: ({0}, {1}) vs ({2}, {3})")]
    AmbientMismatch(usize, usize, usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("form degree {0} outside the supported range")]
    DegreeOutOfRange(usize),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("frame change is not holonomic")]
    NonHolonomic,
    #[error("frame change is not a natural frame change: {0}")]
    NonNatural(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("fixed point is not simple: {0}")]
    SimplicityViolation(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
