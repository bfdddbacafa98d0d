use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not self-adjoint: max |H - H^*| = {deviation:e} exceeds {tolerance:e}")]
    NotSelfAdjoint { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("not a projection pair: {0}")]
    NotProjectionPair(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid eigenvalue function: {0}")]
    InvalidFunction(String),

    #[error("sequence is not nonincreasing at index {index}")]
    Unsorted { index: usize },

    #[error("body specification mismatch: {0}")]
    SpecMismatch(String),

    #[error("polynomial error: {0}")]
    Polynomial(String),

    #[error("expression still contains a radical with non-square radicand ({0})")]
    Irrational(String),

    #[error("linear program failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}
