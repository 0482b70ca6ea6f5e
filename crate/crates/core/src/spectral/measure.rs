//! Spectral measures: absolutely continuous densities and atomic measures,
//! their CDFs, pairings with test functions and serialization.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rkhs::quadrature::gauss_legendre;
use crate::scalar::{ln_binomial, Cx, Real};

/// How density values are produced away from the stored grid.
#[derive(Clone, Debug, PartialEq)]
pub enum DensitySource<T: Real> {
    /// Normal density with the given mean and variance.
    Gaussian { mean: T, variance: T },
    /// Trapezoid samples `F(t0 + j h)` of the star-exponential.
    Inverted { t0: T, h: T, samples: Vec<Cx<T>> },
}

impl<T: Real> DensitySource<T> {
    pub fn density_at(&self, lambda: T) -> T {
        match self {
            DensitySource::Gaussian { mean, variance } => {
                let d = lambda - *mean;
                (-d * d / (T::two() * *variance)).exp() / (T::two() * T::PI() * *variance).sqrt()
            }
            DensitySource::Inverted { t0, h, samples } => {
                let n = samples.len();
                let step = Cx::from_polar(T::one(), *h * lambda);
                let mut acc = Cx::<T>::zero();
                let mut phase = Cx::<T>::zero();
                for (j, f) in samples.iter().enumerate() {
                    // reseed the phase recurrence to bound drift
                    if j % 256 == 0 {
                        phase = Cx::from_polar(T::one(), (*t0 + *h * T::from_usize_lossy(j)) * lambda);
                    }
                    let w = if j == 0 || j + 1 == n { T::half() } else { T::one() };
                    acc += phase * *f * w;
                    phase *= step;
                }
                acc.re * *h / (T::two() * T::PI())
            }
        }
    }
}

/// Density sampled on `lambda0 + k step`.
#[derive(Clone, Debug)]
pub struct DensityMeasure<T: Real> {
    pub lambda0: T,
    pub step: T,
    pub values: Vec<T>,
    source: DensitySource<T>,
    /// Truncation point of the inversion, zero for closed forms.
    pub t_max: T,
    cumulative: OnceLock<Vec<T>>,
}

impl<T: Real> PartialEq for DensityMeasure<T> {
    fn eq(&self, other: &Self) -> bool {
        self.lambda0 == other.lambda0 && self.step == other.step && self.values == other.values && self.source == other.source
    }
}

const CELL_NODES: usize = 8;

impl<T: Real> DensityMeasure<T> {
    pub fn new(lambda0: T, step: T, values: Vec<T>, source: DensitySource<T>, t_max: T) -> Self {
        DensityMeasure {
            lambda0,
            step,
            values,
            source,
            t_max,
            cumulative: OnceLock::new(),
        }
    }

    pub fn source(&self) -> &DensitySource<T> {
        &self.source
    }

    pub fn grid(&self) -> Vec<T> {
        (0..self.values.len())
            .map(|k| self.lambda0 + self.step * T::from_usize_lossy(k))
            .collect()
    }

    pub fn lambda_end(&self) -> T {
        self.lambda0 + self.step * T::from_usize_lossy(self.values.len().saturating_sub(1))
    }

    pub fn density_at(&self, lambda: T) -> T {
        self.source.density_at(lambda)
    }

    /// `int_a^b g(lambda) phi(lambda) dlambda` by Gauss–Legendre.
    fn integrate_cell(&self, a: T, b: T, g: &dyn Fn(T) -> T) -> T {
        let (x, w) = gauss_legendre::<T>(CELL_NODES);
        let half = (b - a) * T::half();
        let mid = (a + b) * T::half();
        x.iter()
            .zip(&w)
            .fold(T::zero(), |acc, (&xi, &wi)| {
                let l = mid + half * xi;
                acc + wi * g(l) * self.density_at(l)
            })
            * half
    }

    fn cumulative(&self) -> &[T] {
        self.cumulative.get_or_init(|| {
            let mut acc = vec![T::zero()];
            let grid = self.grid();
            for k in 1..grid.len() {
                let prev = acc[k - 1];
                acc.push(prev + self.integrate_cell(grid[k - 1], grid[k], &|_| T::one()));
            }
            acc
        })
    }

    /// `int g dmu` over the sampled window.
    pub fn integrate(&self, g: &dyn Fn(T) -> T) -> T {
        let grid = self.grid();
        grid.windows(2)
            .fold(T::zero(), |acc, c| acc + self.integrate_cell(c[0], c[1], g))
    }

    pub fn total_mass(&self) -> T {
        if let DensitySource::Gaussian { .. } = self.source {
            return T::one();
        }
        *self.cumulative().last().unwrap_or(&T::zero())
    }

    pub fn cdf(&self, lambda: T) -> T {
        if let DensitySource::Gaussian { mean, variance } = self.source {
            let x = ((lambda - mean) / (T::two() * variance).sqrt()).to_f64_lossy();
            return T::lit(0.5 * libm::erfc(-x));
        }
        if lambda <= self.lambda0 {
            return T::zero();
        }
        let cum = self.cumulative();
        if lambda >= self.lambda_end() {
            return *cum.last().unwrap();
        }
        let k = ((lambda - self.lambda0) / self.step).floor().to_usize().unwrap_or(0);
        let left = self.lambda0 + self.step * T::from_usize_lossy(k);
        cum[k] + self.integrate_cell(left, lambda, &|_| T::one())
    }

    /// `int e^{-i t lambda} phi(lambda) dlambda`, to compare with the star-exponential.
    pub fn forward_transform(&self, t: T) -> Cx<T> {
        let re_part = self.integrate(&|l| (t * l).cos());
        let im_part = self.integrate(&|l| -(t * l).sin());
        Cx::new(re_part, im_part)
    }
}

/// Finite sum of point masses, sorted by location.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<T: Real> {
    pub locations: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> AtomicMeasure<T> {
    /// Sorts the atoms and merges locations closer than `1e-10` times the spectral width.
    pub fn new(locations: Vec<T>, weights: Vec<T>) -> Self {
        let mut pairs: Vec<(T, T)> = locations.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite locations"));
        let width = match (pairs.first(), pairs.last()) {
            (Some(a), Some(b)) => (b.0 - a.0).max(T::one()),
            _ => T::one(),
        };
        let tol = T::lit(1e-10) * width;
        let mut locations: Vec<T> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<T> = Vec::with_capacity(pairs.len());
        for (l, w) in pairs {
            match locations.last() {
                Some(&last) if (l - last).abs() <= tol => *weights.last_mut().unwrap() += w,
                _ => {
                    locations.push(l);
                    weights.push(w);
                }
            }
        }
        AtomicMeasure { locations, weights }
    }

    pub fn dirac(location: T) -> Self {
        AtomicMeasure {
            locations: vec![location],
            weights: vec![T::one()],
        }
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    pub fn moment(&self, k: i32) -> T {
        self.locations
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |a, (&l, &w)| a + w * l.powi(k))
    }

    pub fn cdf(&self, lambda: T) -> T {
        self.locations
            .iter()
            .zip(&self.weights)
            .filter(|(&l, _)| l <= lambda)
            .fold(T::zero(), |a, (_, &w)| a + w)
    }

    pub fn cdf_left(&self, lambda: T) -> T {
        self.locations
            .iter()
            .zip(&self.weights)
            .filter(|(&l, _)| l < lambda)
            .fold(T::zero(), |a, (_, &w)| a + w)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralMeasure<T: Real> {
    Density(DensityMeasure<T>),
    Atomic(AtomicMeasure<T>),
}

impl<T: Real> SpectralMeasure<T> {
    pub fn cdf(&self, lambda: T) -> T {
        match self {
            SpectralMeasure::Density(d) => d.cdf(lambda),
            SpectralMeasure::Atomic(a) => a.cdf(lambda),
        }
    }

    /// `mu(]-inf, lambda[)`.
    pub fn cdf_left(&self, lambda: T) -> T {
        match self {
            SpectralMeasure::Density(d) => d.cdf(lambda),
            SpectralMeasure::Atomic(a) => a.cdf_left(lambda),
        }
    }

    pub fn total_mass(&self) -> T {
        match self {
            SpectralMeasure::Density(d) => d.total_mass(),
            SpectralMeasure::Atomic(a) => a.total_mass(),
        }
    }

    /// Points where the CDF is compared: grid nodes or atom locations.
    pub fn support_points(&self) -> Vec<T> {
        match self {
            SpectralMeasure::Density(d) => d.grid(),
            SpectralMeasure::Atomic(a) => a.locations.clone(),
        }
    }

    pub fn as_atomic(&self) -> Option<&AtomicMeasure<T>> {
        match self {
            SpectralMeasure::Atomic(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_density(&self) -> Option<&DensityMeasure<T>> {
        match self {
            SpectralMeasure::Density(d) => Some(d),
            _ => None,
        }
    }

    /// `lambda,phi` rows for densities, `lambda_k,w_k` rows for atoms.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            SpectralMeasure::Density(d) => {
                out.push_str("lambda,phi\n");
                for (l, v) in d.grid().iter().zip(&d.values) {
                    let _ = writeln!(out, "{l:.16e},{v:.16e}");
                }
            }
            SpectralMeasure::Atomic(a) => {
                out.push_str("lambda_k,w_k\n");
                for (l, w) in a.locations.iter().zip(&a.weights) {
                    let _ = writeln!(out, "{l:.16e},{w:.16e}");
                }
            }
        }
        out
    }
}

/// A test function with `|phi(lambda)| <= C (1 + lambda^2)^{-k}`.
#[derive(Clone)]
pub struct TestFunction<T: Real> {
    eval: Arc<dyn Fn(T) -> T + Send + Sync>,
    pub decay_c: T,
    pub decay_k: T,
    /// Highest angular frequency of oscillation, zero if none.
    pub frequency: T,
    /// `(center, width)` when `phi = exp(-(lambda - center)^2 / (2 width^2))`.
    pub gaussian: Option<(T, T)>,
}

impl<T: Real> std::fmt::Debug for TestFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("decay_c", &self.decay_c)
            .field("decay_k", &self.decay_k)
            .field("frequency", &self.frequency)
            .field("gaussian", &self.gaussian)
            .finish()
    }
}

impl<T: Real> TestFunction<T> {
    pub fn new(eval: impl Fn(T) -> T + Send + Sync + 'static, decay_c: T, decay_k: T, frequency: T) -> Self {
        TestFunction {
            eval: Arc::new(eval),
            decay_c,
            decay_k,
            frequency,
            gaussian: None,
        }
    }

    /// `exp(-(lambda - center)^2 / (2 width^2))`.
    pub fn gaussian(center: T, width: T) -> Self {
        let mut f = Self::new(
            move |l: T| {
                let d = (l - center) / width;
                (-d * d * T::half()).exp()
            },
            T::one(),
            T::lit(8.0),
            T::zero(),
        );
        f.gaussian = Some((center, width));
        f
    }

    pub fn constant(c: T) -> Self {
        Self::new(move |_| c, c.abs(), T::zero(), T::zero())
    }

    /// `lambda^k`, not decaying but convenient for moments.
    pub fn power(k: i32) -> Self {
        Self::new(move |l: T| l.powi(k), T::one(), -T::from_i32(k).unwrap() * T::half(), T::zero())
    }

    pub fn eval(&self, lambda: T) -> T {
        (self.eval)(lambda)
    }
}

/// `<mu, phi>`: a weighted sum for atoms, Gauss–Legendre cells over the
/// density window otherwise.
pub fn pair_measure_test<T: Real>(mu: &SpectralMeasure<T>, phi: &TestFunction<T>) -> Result<T> {
    match mu {
        SpectralMeasure::Atomic(a) => Ok(a
            .locations
            .iter()
            .zip(&a.weights)
            .fold(T::zero(), |acc, (&l, &w)| acc + w * phi.eval(l))),
        SpectralMeasure::Density(d) => {
            if phi.frequency * d.step > T::PI() {
                return Err(Error::Accuracy(format!(
                    "density grid step {} too coarse for test frequency {}",
                    d.step, phi.frequency
                )));
            }
            Ok(d.integrate(&|l| phi.eval(l)))
        }
    }
}

/// Pairs the measure with the Gaussian test function `phi(lambda) =
/// exp(-(lambda - c)^2 / (2 s^2))` through its star-exponential,
/// `<mu, phi> = s (2 pi)^{-1/2} int e^{i t c} e^{-s^2 t^2 / 2} F(t) dt`.
/// This treats `mu` as a distribution and needs no decay of `F`.
pub fn pair_gaussian_via_star<T: Real>(f: &super::StarExponential<T>, center: T, width: T, nodes: usize) -> Result<T> {
    let l = T::lit(80f64.sqrt()) / width;
    let n = nodes.max(3);
    let h = T::two() * l / T::from_usize_lossy(n - 1);
    let mut acc = Cx::<T>::zero();
    for j in 0..n {
        let t = -l + h * T::from_usize_lossy(j);
        let w = if j == 0 || j + 1 == n { T::half() } else { T::one() };
        let kernel = Cx::from_polar((-width * width * t * t * T::half()).exp(), t * center);
        acc += kernel * f.evaluate(t)? * w;
    }
    Ok((acc * h * width / (T::two() * T::PI()).sqrt()).re)
}

/// Normal density with mean `a1 x + a2 y + a3 gamma` and variance
/// `gamma (a1^2 + a2^2) / 2` for `-i dpi(X)` at `z = x + iy` on Fock(gamma).
pub fn gaussian_density<T: Real>(gamma: T, x: &crate::groups::AlgebraVector<T>, z: Cx<T>) -> Result<SpectralMeasure<T>> {
    if x.algebra != crate::groups::Algebra::Heis {
        return Err(Error::mismatch("gaussian_density needs a Heisenberg algebra vector"));
    }
    if !(gamma > T::zero()) {
        return Err(Error::domain("gamma must be positive"));
    }
    let [a1, a2, a3] = x.x;
    let mean = a1 * z.re + a2 * z.im + a3 * gamma;
    let variance = gamma * (a1 * a1 + a2 * a2) * T::half();
    if variance.is_zero() {
        return Err(Error::Degenerate {
            location: mean.to_f64_lossy(),
        });
    }
    let sigma = variance.sqrt();
    let step = sigma / T::lit(8.0);
    let count = 161usize;
    let lambda0 = mean - step * T::lit(80.0);
    let source = DensitySource::Gaussian { mean, variance };
    let values = (0..count)
        .map(|k| source.density_at(lambda0 + step * T::from_usize_lossy(k)))
        .collect();
    Ok(SpectralMeasure::Density(DensityMeasure::new(lambda0, step, values, source, T::zero())))
}

/// `2^{-m} sum_k binom(m, k) delta_{r (k - m/2)}`.
pub fn binomial_measure<T: Real>(m: u32, r: T) -> Result<SpectralMeasure<T>> {
    if m < 1 {
        return Err(Error::domain("binomial measure needs m >= 1"));
    }
    let mm = T::from_u32(m).unwrap();
    let ln2m = mm * T::LN_2();
    let (locations, weights) = (0..=m)
        .map(|k| {
            let kk = T::from_u32(k).unwrap();
            (r * (kk - mm * T::half()), (ln_binomial::<T>(m as u64, k as u64) - ln2m).exp())
        })
        .unzip();
    Ok(SpectralMeasure::Atomic(AtomicMeasure::new(locations, weights)))
}

/// `sum_k binom(m, k) p^k (1 - p)^{m - k} delta_{r (k - m/2)}`.
pub fn biased_binomial_measure<T: Real>(m: u32, r: T, p: T) -> Result<SpectralMeasure<T>> {
    if m < 1 {
        return Err(Error::domain("binomial measure needs m >= 1"));
    }
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    let mm = T::from_u32(m).unwrap();
    let term = |k: u32, ln_q: T| if k == 0 { T::zero() } else { T::from_u32(k).unwrap() * ln_q };
    let (locations, weights) = (0..=m)
        .map(|k| {
            let kk = T::from_u32(k).unwrap();
            let ln_w = ln_binomial::<T>(m as u64, k as u64) + term(k, p.ln()) + term(m - k, (T::one() - p).ln());
            (r * (kk - mm * T::half()), ln_w.exp())
        })
        .unzip();
    Ok(SpectralMeasure::Atomic(AtomicMeasure::new(locations, weights)))
}

/// `sup |F_1 - F_2|` over the merged support points, comparing both the
/// value and the left limit at every point.
pub fn kolmogorov_distance<T: Real>(mu1: &SpectralMeasure<T>, mu2: &SpectralMeasure<T>) -> T {
    let mut pts = mu1.support_points();
    pts.extend(mu2.support_points());
    pts.iter().fold(T::zero(), |m, &p| {
        m.max((mu1.cdf(p) - mu2.cdf(p)).abs())
            .max((mu1.cdf_left(p) - mu2.cdf_left(p)).abs())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::AlgebraVector;

    #[test]
    fn binomial_examples() {
        let mu = binomial_measure::<f64>(1, 1.0).unwrap();
        let a = mu.as_atomic().unwrap();
        assert_eq!(a.locations, vec![-0.5, 0.5]);
        assert_eq!(a.weights, vec![0.5, 0.5]);
        let mu = binomial_measure::<f64>(2, 1.0).unwrap();
        assert!((pair_measure_test(&mu, &TestFunction::power(2)).unwrap() - 0.5).abs() < 1e-15);
        assert!((mu.cdf(0.0) - 0.75).abs() < 1e-15);
        assert!((mu.cdf_left(0.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gaussian_examples() {
        let mu = gaussian_density(1.0, &AlgebraVector::heis(1.0, 0.0, 0.0), Cx::zero()).unwrap();
        let d = mu.as_density().unwrap();
        let pi = std::f64::consts::PI;
        assert!((d.density_at(0.3) - (-0.09f64).exp() / pi.sqrt()).abs() < 1e-15);
        assert!((mu.cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((mu.cdf(40.0) - 1.0).abs() < 1e-15);
        let one = pair_measure_test(&mu, &TestFunction::constant(1.0)).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        match gaussian_density(2.0, &AlgebraVector::heis(0.0, 0.0, 1.5), Cx::new(0.3, 0.1)) {
            Err(Error::Degenerate { location }) => assert_eq!(location, 3.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kolmogorov_examples() {
        let d0 = SpectralMeasure::Atomic(AtomicMeasure::dirac(0.0));
        let d1 = SpectralMeasure::Atomic(AtomicMeasure::dirac(1.0));
        assert_eq!(kolmogorov_distance(&d0, &d0), 0.0);
        assert_eq!(kolmogorov_distance(&d0, &d1), 1.0);
        let b = binomial_measure::<f64>(2, 1.0).unwrap();
        let g = gaussian_density(1.0, &AlgebraVector::heis(1.0, 0.0, 0.0), Cx::zero()).unwrap();
        assert!((kolmogorov_distance(&b, &g) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn dirac_pairing_and_merging() {
        let d0 = SpectralMeasure::Atomic(AtomicMeasure::dirac(0.0));
        assert_eq!(pair_measure_test(&d0, &TestFunction::gaussian(0.0, 0.5f64.sqrt())).unwrap(), 1.0);
        let a = AtomicMeasure::new(vec![1.0, 0.0, 1.0 + 1e-12], vec![0.25, 0.5, 0.25]);
        assert_eq!(a.locations.len(), 2);
        assert_eq!(a.weights, vec![0.5, 0.5]);
    }
}
