//! Truncated holomorphic series and the three reproducing-kernel spaces.

pub mod quadrature;
pub mod series;
pub mod space;

pub use quadrature::{gauss_legendre, quadrature_inner_product, QuadratureSpec};
pub use series::{Clipped, TruncatedSeries};
pub use space::{DiagonalWeights, Expansion, SpaceKind, SpaceModel, DEFAULT_DISC_MARGIN, DEFAULT_TRUNCATION};
