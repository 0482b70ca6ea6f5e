//! Independent inner-product oracle: 2D integration of `f conj(g)` against the
//! norm measure in polar coordinates.

use num_traits::Zero;

use super::series::TruncatedSeries;
use super::space::{SpaceKind, SpaceModel};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Grid of the polar quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec<T> {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Radial cutoff; `None` selects the per-space default.
    pub radial_cutoff: Option<T>,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 256,
            angular_nodes: 256,
            radial_cutoff: None,
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nn = T::from_usize_lossy(n);
    for i in 0..n.div_ceil(2) {
        let ii = T::from_usize_lossy(i);
        let mut x = (T::PI() * (ii + T::lit(0.75)) / (nn + T::half())).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (T::one(), x);
            for k in 2..=n {
                let kk = T::from_usize_lossy(k);
                let p2 = ((T::two() * kk - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = T::one();
                p1 = x;
            }
            dp = nn * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let w = T::two() / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn map_rule<T: Real>(nodes: &[T], weights: &[T], a: T, b: T) -> Vec<(T, T)> {
    let half = (b - a) * T::half();
    let mid = (a + b) * T::half();
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| (mid + half * x, half * w))
        .collect()
}

fn abs_poly<T: Real>(f: &TruncatedSeries<T>, r: T) -> T {
    f.coeffs().iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
}

/// Approximates `<f, g>` by Gauss–Legendre in the radius times the trapezoid
/// rule in the angle.
///
/// Fock integrates `[0, R]` with `R = sqrt(2 gamma) (6 + sqrt(2 d))`, `d` the
/// combined degree, unless a cutoff is given; a tail estimate beyond `R` that
/// is not negligible is reported as [`Error::Accuracy`]. Disc integrates
/// `[0, 1 - 1e-6]`. Poly substitutes `r = tan(phi)` and integrates the
/// compact interval `[0, pi/2]`.
pub fn quadrature_inner_product<T: Real>(
    f: &TruncatedSeries<T>,
    g: &TruncatedSeries<T>,
    space: &SpaceModel<T>,
    spec: &QuadratureSpec<T>,
) -> Result<Cx<T>> {
    if spec.radial_nodes == 0 || spec.angular_nodes == 0 {
        return Err(Error::domain("quadrature grid must be nonempty"));
    }
    space.check_member(f)?;
    space.check_member(g)?;
    let (gl_x, gl_w) = gauss_legendre::<T>(spec.radial_nodes);
    let na = spec.angular_nodes;
    let dtheta = T::two() * T::PI() / T::from_usize_lossy(na);
    let angles: Vec<Cx<T>> = (0..na)
        .map(|j| Cx::from_polar(T::one(), dtheta * T::from_usize_lossy(j)))
        .collect();

    // radial samples: (radius, weight including the Jacobian and the measure density)
    let radial: Vec<(T, T)> = match space.kind() {
        SpaceKind::Fock { gamma } => {
            let d = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
            let cutoff = spec.radial_cutoff.unwrap_or_else(|| {
                (T::two() * gamma).sqrt() * (T::lit(6.0) + (T::two() * T::from_usize_lossy(d)).sqrt())
            });
            let main = map_rule(&gl_x, &gl_w, T::zero(), cutoff);
            let envelope = |rule: &[(T, T)]| {
                rule.iter().fold(T::zero(), |acc, &(r, w)| {
                    let dens = space.measure_density(Cx::new(r, T::zero()));
                    acc + w * r * dens * abs_poly(f, r) * abs_poly(g, r)
                })
            };
            let far = map_rule(&gl_x[..], &gl_w[..], cutoff, cutoff * T::lit(3.0));
            let inside = envelope(&main);
            let outside = envelope(&far);
            if outside > T::lit(1e-13) * inside.max(T::min_positive_value()) {
                return Err(Error::Accuracy(format!(
                    "radial cutoff {cutoff} too small: tail estimate {outside:e} vs {inside:e}"
                )));
            }
            main.into_iter()
                .map(|(r, w)| (r, w * r * space.measure_density(Cx::new(r, T::zero()))))
                .collect()
        }
        SpaceKind::Disc { .. } => {
            let cutoff = spec.radial_cutoff.unwrap_or(T::one() - T::lit(1e-6));
            map_rule(&gl_x, &gl_w, T::zero(), cutoff)
                .into_iter()
                .map(|(r, w)| (r, w * r * space.measure_density(Cx::new(r, T::zero()))))
                .collect()
        }
        SpaceKind::Poly { .. } => map_rule(&gl_x, &gl_w, T::zero(), T::FRAC_PI_2())
            .into_iter()
            .map(|(phi, w)| {
                let r = phi.tan();
                let sec2 = T::one() / (phi.cos() * phi.cos());
                (r, w * sec2 * r * space.measure_density(Cx::new(r, T::zero())))
            })
            .collect(),
    };

    let mut acc = Cx::zero();
    for &(r, wr) in &radial {
        if wr.is_zero() {
            continue;
        }
        let mut ring = Cx::zero();
        for u in &angles {
            let z = *u * r;
            ring += f.evaluate(z) * g.evaluate(z).conj();
        }
        acc += ring * (wr * dtheta);
    }
    Ok(acc)
}
