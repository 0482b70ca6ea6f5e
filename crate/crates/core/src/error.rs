use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated expansion cannot meet the requested precision.
    #[error("precision error: {message} (tail bound {tail:e})")]
    Precision { message: String, tail: f64 },

    /// A fractional map or automorphy factor hits a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// Integer power of a vanishing base with a negative exponent.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The star-exponential does not decay; the measure is not absolutely continuous.
    #[error("integrability error: {0}")]
    Integrability(String),

    /// The measure is a point mass, no density exists.
    #[error("degenerate measure: point mass at {location}")]
    Degenerate { location: f64 },

    /// The reproducing kernel vanishes at the requested pair of points.
    #[error("degenerate pair: kernel vanishes at ({z}, {w})")]
    DegeneratePair { z: String, w: String },

    /// Numerical quadrature did not converge to the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// Operands belong to different algebras or spaces.
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }
}
