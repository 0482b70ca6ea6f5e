//! Berezin quantization on the Fock space, the weighted Bergman spaces of
//! the disc and the spaces of polynomials of bounded degree; spectral
//! measures of `-i dpi(X)` and the contractions of SU(1,1) and SU(2) to the
//! Heisenberg group.
//!
//! Everything is generic over a [`Real`] scalar; the aliases below fix `f64`.

pub mod checks;
pub mod contraction;
pub mod error;
pub mod groups;
pub mod reps;
pub mod rkhs;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Series = rkhs::TruncatedSeries<f64>;
pub type Space = rkhs::SpaceModel<f64>;
pub type Vector = groups::AlgebraVector<f64>;
pub type Heis = groups::HeisenbergElement<f64>;
pub type Matrix2 = groups::Matrix2Element<f64>;
pub type Measure = spectral::SpectralMeasure<f64>;
pub type Table = contraction::ConvergenceTable<f64>;
