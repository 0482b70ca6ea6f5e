//! Spectral measures of `-i dpi(X)` in coherent states.

pub mod eigen;
pub mod measure;
pub mod star;

pub use eigen::{hermitian_tridiagonal_eigen, Eigen};
pub use measure::{
    biased_binomial_measure, binomial_measure, gaussian_density, kolmogorov_distance, pair_gaussian_via_star, pair_measure_test, AtomicMeasure,
    DensityMeasure, DensitySource, SpectralMeasure, TestFunction,
};
pub use star::{fourier_invert_density, star_exponential, truncation_point, InversionSpec, StarExponential};

use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::groups::{Algebra, AlgebraVector};
use crate::reps::dpi_tridiagonal;
use crate::rkhs::{SpaceKind, SpaceModel};
use crate::scalar::{Cx, Real};

/// Atomic spectral measure of `-i drho_m(X)` in the normalized coherent state
/// at `z`, from the eigendecomposition of the tridiagonal matrix.
pub fn spectral_measure_finite<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, z: Cx<T>) -> Result<SpectralMeasure<T>> {
    let SpaceKind::Poly { m } = space.kind() else {
        return Err(Error::domain("the eigendecomposition path needs the polynomial space"));
    };
    let state = space.coherent_state_with(z, m as usize)?.series;
    let norm = space.kernel_weight(z).sqrt();
    let coords: Vec<Cx<T>> = space.to_orthonormal(&state)?.into_iter().map(|c| c / norm).collect();
    spectral_measure_of_state(space, x, &coords)
}

/// Spectral measure of `-i drho_m(X)` at `z` in closed form. The coherent state
/// is a rotated extremal weight vector, so the measure is binomial on
/// `|X| (k - m/2)` with bias fixed by the first moment
/// `S(-i drho_m(X))(z) = -i (p0 + p1 z + (q0 + q1 z + q2 z^2) m conj(z) / (1 + |z|^2))`.
pub fn su2_closed_form_measure<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, z: Cx<T>) -> Result<SpectralMeasure<T>> {
    let SpaceKind::Poly { m } = space.kind() else {
        return Err(Error::domain("the closed-form binomial needs the polynomial space"));
    };
    if x.algebra != Algebra::Su2 {
        return Err(Error::mismatch("the closed-form binomial needs an su(2) vector"));
    }
    let [x1, x2, x3] = x.x;
    let norm = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
    if norm == T::zero() {
        return Ok(SpectralMeasure::Atomic(AtomicMeasure::dirac(T::zero())));
    }
    let mm = T::from_u32(m).unwrap();
    let h = T::half();
    let i = Cx::new(T::zero(), T::one());
    let p0 = i * (mm * h * x3);
    let p1 = -Cx::new(x2, x1) * (mm * h);
    let q0 = Cx::new(x2, -x1) * h;
    let q1 = -i * x3;
    let q2 = Cx::new(x2, x1) * h;
    let symbol = p0 + p1 * z + (q0 + q1 * z + q2 * z * z) * z.conj() * (mm / (T::one() + z.norm_sqr()));
    let mean = (-i * symbol).re;
    let bias = (h + mean / (mm * norm)).max(T::zero()).min(T::one());
    biased_binomial_measure(m, norm, bias)
}

/// Atomic spectral measure of `-i drho_m(X)` in a unit vector given by its
/// orthonormal coordinates.
pub fn spectral_measure_of_state<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, coords: &[Cx<T>]) -> Result<SpectralMeasure<T>> {
    let SpaceKind::Poly { m } = space.kind() else {
        return Err(Error::domain("the eigendecomposition path needs the polynomial space"));
    };
    let dim = m as usize + 1;
    let tri = dpi_tridiagonal(space, x, dim)?;
    let rows = coords.iter().rposition(|c| !c.is_zero()).map_or(1, |r| r + 1);
    let eig = hermitian_tridiagonal_eigen(&tri, rows)?;
    let weights = eig
        .vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(coords)
                .fold(Cx::zero(), |acc, (psi, c)| acc + *c * psi.conj())
                .norm_sqr()
        })
        .collect();
    Ok(SpectralMeasure::Atomic(AtomicMeasure::new(eig.values, weights)))
}

/// The spectral measure of `-i dpi(X)` at `z` by the route suited to the space:
/// closed-form Gaussian or a point mass on Fock, eigendecomposition on Poly,
/// Fourier inversion on Disc.
pub fn spectral_measure<T: Real>(
    space: &SpaceModel<T>,
    x: &AlgebraVector<T>,
    z: Cx<T>,
    spec: &InversionSpec<T>,
) -> Result<SpectralMeasure<T>> {
    match space.kind() {
        SpaceKind::Fock { gamma } => match gaussian_density(gamma, x, z) {
            Err(Error::Degenerate { .. }) => Ok(SpectralMeasure::Atomic(AtomicMeasure::dirac(x.x[2] * gamma))),
            other => other,
        },
        SpaceKind::Poly { .. } => spectral_measure_finite(space, x, z),
        SpaceKind::Disc { .. } => fourier_invert_density(&star_exponential(space, x, z)?, spec),
    }
}

/// `S(E_lambda)(z) = mu(]-inf, lambda])`.
pub fn cdf_symbol<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, z: Cx<T>, lambda: T) -> Result<T> {
    Ok(spectral_measure(space, x, z, &InversionSpec::default())?.cdf(lambda))
}

/// JSON sidecar describing how a measure was produced.
pub fn measure_sidecar<T: Real>(
    space: &SpaceModel<T>,
    x: &AlgebraVector<T>,
    z: Cx<T>,
    method: &str,
    mu: &SpectralMeasure<T>,
) -> serde_json::Value {
    let grid = match mu {
        SpectralMeasure::Density(d) => json!({
            "lambda0": d.lambda0.to_f64_lossy(),
            "step": d.step.to_f64_lossy(),
            "points": d.values.len(),
            "t_max": d.t_max.to_f64_lossy(),
        }),
        SpectralMeasure::Atomic(a) => json!({ "atoms": a.locations.len() }),
    };
    json!({
        "space": space.name(),
        "X": x.x.map(|v| v.to_f64_lossy()),
        "algebra": x.algebra,
        "z": [z.re.to_f64_lossy(), z.im.to_f64_lossy()],
        "method": method,
        "grid": grid,
        "total_mass": mu.total_mass().to_f64_lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;

    #[test]
    fn su2_binomial_atoms() {
        let poly = SpaceModel::<f64>::poly(2).unwrap();
        let mu = spectral_measure_finite(&poly, &AlgebraVector::su2(1.0, 0.0, 0.0), Cx::zero()).unwrap();
        let a = mu.as_atomic().unwrap();
        for (l, e) in a.locations.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((l - e).abs() < 1e-14);
        }
        for (w, e) in a.weights.iter().zip([0.25, 0.5, 0.25]) {
            assert!((w - e).abs() < 1e-14);
        }
    }

    #[test]
    fn first_moment_matches_expectation() {
        let poly = SpaceModel::<f64>::poly(6).unwrap();
        let x = AlgebraVector::su2(0.4, -1.2, 0.7);
        let z = Cx::new(0.3, -0.8);
        let mu = spectral_measure_finite(&poly, &x, z).unwrap();
        let a = mu.as_atomic().unwrap();
        let state = poly.coherent_state(z).unwrap().series;
        let v: Vec<Cx<f64>> = poly
            .to_orthonormal(&state)
            .unwrap()
            .into_iter()
            .map(|c| c / poly.kernel_weight(z).sqrt())
            .collect();
        let m = crate::reps::dpi_matrix(&poly, &x, 7).unwrap();
        let first = m.sesquilinear(&v, &v);
        assert!((a.moment(1) - first.re).abs() < 1e-12);
        let second = m.matmul(&m).unwrap().sesquilinear(&v, &v);
        assert!((a.moment(2) - second.re).abs() < 1e-12);
        assert!((a.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_eigen() {
        let poly = SpaceModel::<f64>::poly(9).unwrap();
        for (x, z) in [
            (AlgebraVector::su2(0.4, -1.2, 0.7), Cx::new(0.3, -0.8)),
            (AlgebraVector::su2(0.0, 0.0, 2.0), Cx::new(1.5, 0.2)),
            (AlgebraVector::su2(1.0, 0.0, 0.0), Cx::zero()),
        ] {
            let a = spectral_measure_finite(&poly, &x, z).unwrap();
            let b = su2_closed_form_measure(&poly, &x, z).unwrap();
            let (a, b) = (a.as_atomic().unwrap(), b.as_atomic().unwrap());
            for k in 0..10 {
                assert!((a.locations[k] - b.locations[k]).abs() < 1e-12);
                assert!((a.weights[k] - b.weights[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cdf_examples() {
        let fock = SpaceModel::<f64>::fock(1.0).unwrap();
        let v1 = AlgebraVector::heis(1.0, 0.0, 0.0);
        assert!((cdf_symbol(&fock, &v1, Cx::zero(), 0.0).unwrap() - 0.5).abs() < 1e-15);
        let poly = SpaceModel::<f64>::poly(2).unwrap();
        let u1 = AlgebraVector::su2(1.0, 0.0, 0.0);
        assert!((cdf_symbol(&poly, &u1, Cx::zero(), 0.0).unwrap() - 0.75).abs() < 1e-14);
        let centre = cdf_symbol(&fock, &AlgebraVector::heis(0.0, 0.0, 1.0), re(2.0), 1.0).unwrap();
        assert_eq!(centre, 1.0);
    }
}
