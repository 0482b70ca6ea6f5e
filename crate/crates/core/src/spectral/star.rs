//! Star-exponentials `t -> S(pi(exp(-tX)))(z)` and Fourier inversion of their densities.

use serde::Serialize;

use super::measure::{DensityMeasure, DensitySource, SpectralMeasure};
use crate::error::{Error, Result};
use crate::groups::{entire_s, Algebra, AlgebraVector};
use crate::reps::{closed_form_symbol, group_exp};
use crate::rkhs::{SpaceKind, SpaceModel};
use crate::scalar::{cx, ln_1p_cx, Cx, Real};

#[derive(Clone, Debug, PartialEq)]
enum StarKind<T: Real> {
    /// `exp(-i t mean - variance t^2 / 2)`.
    Gaussian { mean: T, variance: T },
    /// Closed-form symbol of `pi(exp(-tX))` at `z`.
    Symbol {
        space: SpaceModel<T>,
        x: AlgebraVector<T>,
        z: Cx<T>,
    },
    /// `(cosh(r d t / 2) + i c3 d^{-1} sinh(r d t / 2))^{-n}` with
    /// `d^2 = c1^2 + c2^2 - c3^2`.
    Reduced { n: u32, r: T, c: [T; 3] },
}

/// The symbol of the one-parameter group generated by `-i dpi(X)` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct StarExponential<T: Real> {
    kind: StarKind<T>,
}

/// Builds the star-exponential of `X` at `z`.
///
/// Fock uses the Gaussian closed form, Disc and Poly the closed-form symbols
/// of `exp(-tX)`.
pub fn star_exponential<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, z: Cx<T>) -> Result<StarExponential<T>> {
    let expected = crate::reps::algebra_for(space);
    if x.algebra != expected {
        return Err(Error::mismatch(format!("{:?} does not act on {}", x.algebra, space.name())));
    }
    if !space.contains(z) {
        return Err(Error::domain(format!("{z} outside the domain of {}", space.name())));
    }
    if !space.is_admissible(z) {
        return Err(Error::Precision {
            message: format!("|z| = {} exceeds 1 - margin for {}", z.norm(), space.name()),
            tail: f64::NAN,
        });
    }
    let kind = match space.kind() {
        SpaceKind::Fock { gamma } => {
            let [a1, a2, a3] = x.x;
            StarKind::Gaussian {
                mean: a1 * z.re + a2 * z.im + a3 * gamma,
                variance: gamma * (a1 * a1 + a2 * a2) * T::half(),
            }
        }
        _ => StarKind::Symbol {
            space: space.clone(),
            x: *x,
            z,
        },
    };
    Ok(StarExponential { kind })
}

impl<T: Real> StarExponential<T> {
    /// The SU(1,1) star-exponential reduced to the origin: `n` the discrete
    /// series index, `r` the contraction parameter and `c` the coordinates of
    /// `Ad(g_z)^{-1} C_r(X) / r`.
    pub fn reduced_disc(n: u32, r: T, c: [T; 3]) -> Self {
        StarExponential {
            kind: StarKind::Reduced { n, r, c },
        }
    }

    /// `F(t)`.
    pub fn evaluate(&self, t: T) -> Result<Cx<T>> {
        match &self.kind {
            StarKind::Gaussian { mean, variance } => Ok(cx(-*variance * t * t * T::half(), -*mean * t).exp()),
            StarKind::Symbol { space, x, z } => {
                let g = group_exp(&x.scale(-t))?;
                closed_form_symbol(space, &g, *z)
            }
            StarKind::Reduced { n, r, c } => {
                let d2 = c[0] * c[0] + c[1] * c[1] - c[2] * c[2];
                let u = *r * t * T::half();
                let x = u * u * d2;
                // cosh(u d) - 1 = x S(x/4)^2 / 2 keeps precision when u d is small
                let s4 = entire_s(x * T::lit(0.25));
                let cm1 = x * s4 * s4 * T::half();
                let w = cx(cm1, c[2] * u * entire_s(x));
                let nn = T::from_u32(*n).unwrap();
                Ok((-ln_1p_cx(w) * nn).exp())
            }
        }
    }

    /// Whether the generator has pure point spectrum at this state, so no density exists.
    pub fn is_pure_point(&self) -> bool {
        match &self.kind {
            StarKind::Gaussian { variance, .. } => variance.is_zero(),
            StarKind::Symbol { space, x, .. } => match space.kind() {
                SpaceKind::Poly { .. } => true,
                _ => x.algebra == Algebra::Su11 && x.invariant_form() < T::zero(),
            },
            StarKind::Reduced { c, .. } => c[0] * c[0] + c[1] * c[1] - c[2] * c[2] < T::zero(),
        }
    }

    /// `(mean, variance)` for the Fock closed form.
    pub fn gaussian_parameters(&self) -> Option<(T, T)> {
        match self.kind {
            StarKind::Gaussian { mean, variance } => Some((mean, variance)),
            _ => None,
        }
    }

    /// `d^2` of the reduced SU(1,1) form.
    pub fn reduced_d_sqr(&self) -> Option<T> {
        match self.kind {
            StarKind::Reduced { c, .. } => Some(c[0] * c[0] + c[1] * c[1] - c[2] * c[2]),
            _ => None,
        }
    }

    pub fn method(&self) -> &'static str {
        match self.kind {
            StarKind::Gaussian { .. } => "fock-closed-form",
            StarKind::Symbol { .. } => "closed-form-symbol",
            StarKind::Reduced { .. } => "su11-reduced",
        }
    }
}

/// Parameters of the trapezoid Fourier inversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InversionSpec<T> {
    /// Number of trapezoid nodes on `[-T, T]`.
    pub nodes: usize,
    /// Required `|F|` beyond the truncation point.
    pub tail_eps: T,
    /// Largest admissible truncation point.
    pub t_limit: T,
    /// Density level at which the output grid stops.
    pub density_floor: T,
}

impl<T: Real> Default for InversionSpec<T> {
    fn default() -> Self {
        InversionSpec {
            nodes: 1 << 14,
            tail_eps: T::lit(1e-12),
            t_limit: T::lit(1e4),
            density_floor: T::lit(1e-14),
        }
    }
}

/// Largest `|F|` over `[t, 2t]` and `[-2t, -t]` on a 64-point scan.
fn scan_tail<T: Real>(f: &StarExponential<T>, t: T) -> Result<T> {
    let mut worst = T::zero();
    for j in 0..=64 {
        let s = t * (T::one() + T::from_usize_lossy(j) / T::lit(64.0));
        worst = worst.max(f.evaluate(s)?.norm()).max(f.evaluate(-s)?.norm());
    }
    Ok(worst)
}

/// Smallest `T` (up to bisection resolution) with `|F(t)| < eps` for `|t| >= T`.
pub fn truncation_point<T: Real>(f: &StarExponential<T>, spec: &InversionSpec<T>) -> Result<T> {
    let mut hi = T::one();
    while scan_tail(f, hi)? >= spec.tail_eps {
        hi *= T::two();
        if hi > spec.t_limit {
            return Err(Error::Integrability(format!(
                "|F(t)| stays above {:e} up to t = {}; the spectrum is not absolutely continuous, use the atomic path",
                spec.tail_eps, spec.t_limit
            )));
        }
    }
    let mut lo = hi * T::half();
    for _ in 0..30 {
        let mid = (lo + hi) * T::half();
        if scan_tail(f, mid)? < spec.tail_eps {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= T::lit(1e-3) * hi {
            break;
        }
    }
    Ok(hi)
}

/// `phi(lambda) = (2 pi)^{-1} int e^{i t lambda} F(t) dt` by the trapezoid rule on
/// `[-T, T]`, sampled on a grid of spacing `pi / T` centred on the mean and
/// extended until the density falls below the floor.
pub fn fourier_invert_density<T: Real>(f: &StarExponential<T>, spec: &InversionSpec<T>) -> Result<SpectralMeasure<T>> {
    if f.is_pure_point() {
        return Err(Error::Integrability(
            "the generator has pure point spectrum here; use the atomic measure (spectrum command)".into(),
        ));
    }
    if spec.nodes < 3 {
        return Err(Error::domain("inversion needs at least 3 nodes"));
    }
    let t_max = truncation_point(f, spec)?;
    let n = spec.nodes;
    let h = T::two() * t_max / T::from_usize_lossy(n - 1);
    let samples = (0..n)
        .map(|j| f.evaluate(-t_max + h * T::from_usize_lossy(j)))
        .collect::<Result<Vec<_>>>()?;
    let source = DensitySource::Inverted {
        t0: -t_max,
        h,
        samples,
    };

    let dh = t_max * T::lit(1e-6);
    let mean = ((f.evaluate(dh)? - f.evaluate(-dh)?) * cx(T::zero(), T::one()) / (T::two() * dh)).re;
    let step = T::PI() / t_max;
    let max_points = 1_000_000usize;
    let mut right = Vec::new();
    let mut k = 0usize;
    loop {
        let v = source.density_at(mean + step * T::from_usize_lossy(k));
        right.push(v);
        k += 1;
        if (v.abs() < spec.density_floor && k > 1) || k > max_points {
            break;
        }
    }
    let mut left = Vec::new();
    let mut k = 1usize;
    loop {
        let v = source.density_at(mean - step * T::from_usize_lossy(k));
        left.push(v);
        k += 1;
        if v.abs() < spec.density_floor || k > max_points {
            break;
        }
    }
    if right.len() + left.len() > max_points {
        return Err(Error::Accuracy("density window did not close".into()));
    }
    let lambda0 = mean - step * T::from_usize_lossy(left.len());
    let mut values: Vec<T> = left.into_iter().rev().collect();
    values.extend(right);
    Ok(SpectralMeasure::Density(DensityMeasure::new(lambda0, step, values, source, t_max)))
}
