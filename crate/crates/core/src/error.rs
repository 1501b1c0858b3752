//! Error type shared across the crate.

/// Unified error for optimizer steps, problem evaluation, configuration
/// parsing, and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two buffers that must have equal length do not.
    #[error("shape mismatch in {what}: expected length {expected}, got {got}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A vector input or intermediate contains a NaN or infinity.
    #[error("non-finite {what} at index {index}: {value}")]
    NonFinite {
        what: &'static str,
        index: usize,
        value: f64,
    },

    /// A scalar input or intermediate is NaN or infinite.
    #[error("non-finite {what}: {value}")]
    NonFiniteScalar { what: &'static str, value: f64 },

    /// A hyperparameter violates its documented constraint.
    #[error("invalid hyperparameter {name} = {value}: must satisfy {constraint}")]
    InvalidHyper {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A configuration file or in-memory config is malformed.
    #[error("invalid config: {0}")]
    Config(String),

    /// A dataset or trace file is malformed.
    #[error("invalid data: {0}")]
    Data(String),

    /// Underlying file I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `Err(Error::NonFinite)` for the first non-finite element, if any.
pub fn ensure_finite(what: &'static str, xs: &[f64]) -> Result<()> {
    for (index, &value) in xs.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { what, index, value });
        }
    }
    Ok(())
}

/// Returns `Err(Error::NonFiniteScalar)` if `x` is NaN or infinite.
pub fn ensure_finite_scalar(what: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteScalar { what, value: x });
    }
    Ok(())
}

/// Returns `Err(Error::ShapeMismatch)` unless the two lengths agree.
pub fn ensure_same_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::ShapeMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}
