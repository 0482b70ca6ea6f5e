use num_traits::Zero;

use super::series::{Clipped, TruncatedSeries};
use crate::error::{Error, Result};
use crate::scalar::{re, Cx, Real};

pub const DEFAULT_TRUNCATION: usize = 128;
pub const DEFAULT_DISC_MARGIN: f64 = 0.1;

/// Which of the three holomorphic function spaces is in use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceKind<T> {
    /// Bargmann–Fock space on the plane with parameter `gamma > 0`.
    Fock { gamma: T },
    /// Weighted Bergman space on the unit disc, discrete series index `n > 2`.
    Disc { n: u32 },
    /// Polynomials of degree at most `m` with the rotation-invariant weight.
    Poly { m: u32 },
}

/// A space together with its working truncation degree.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceModel<T: Real> {
    kind: SpaceKind<T>,
    truncation: usize,
    disc_margin: T,
}

/// `<z^p, z^q> = delta_pq c_p`, stored both directly and as logarithms.
///
/// Direct values may overflow for large `p`; the logarithms never do.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalWeights<T: Real> {
    c: Vec<T>,
    ln_c: Vec<T>,
}

impl<T: Real> DiagonalWeights<T> {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `c_p`, `+inf` when the monomial is not in the space (Poly above `m`).
    pub fn c(&self, p: usize) -> T {
        self.c[p]
    }

    pub fn ln_c(&self, p: usize) -> T {
        self.ln_c[p]
    }

    pub fn defined(&self, p: usize) -> bool {
        self.ln_c[p].is_finite()
    }

    /// `sqrt(c_q / c_p)`, the conversion factor between unit basis vectors.
    pub fn sqrt_ratio(&self, q: usize, p: usize) -> T {
        ((self.ln_c[q] - self.ln_c[p]) * T::half()).exp()
    }

    /// `a * c_p^power` evaluated through logarithms when the direct product overflows.
    pub fn scale(&self, a: Cx<T>, p: usize, power: T) -> Cx<T> {
        if a.is_zero() {
            return Cx::zero();
        }
        let direct = self.c[p].powf(power);
        if direct.is_finite() && direct > T::zero() {
            let v = a * direct;
            if v.re.is_finite() && v.im.is_finite() {
                return v;
            }
        }
        let mag = (a.norm().ln() + power * self.ln_c[p]).exp();
        Cx::from_polar(mag, a.arg())
    }

    /// `a conj(b) c_p`, computed through logarithms when any factor is extreme.
    pub fn weighted_product(&self, a: Cx<T>, b: Cx<T>, p: usize) -> Cx<T> {
        if a.is_zero() || b.is_zero() {
            return Cx::zero();
        }
        let c = self.c[p];
        if c.is_finite() && c > T::zero() {
            let v = a * b.conj() * c;
            let floor = T::min_positive_value() / T::epsilon();
            if v.re.is_finite() && v.im.is_finite() && v.norm() > floor {
                return v;
            }
        }
        let mag = (a.norm().ln() + b.norm().ln() + self.ln_c[p]).exp();
        Cx::from_polar(mag, a.arg() - b.arg())
    }

    /// Weighted norm of clipped coefficients.
    pub fn tail_norm(&self, clipped: &Clipped<T>) -> T {
        let mut acc = T::zero();
        for (j, a) in clipped.coeffs.iter().enumerate() {
            let p = clipped.first_index + j;
            if a.is_zero() {
                continue;
            }
            if p >= self.len() || !self.defined(p) {
                return T::infinity();
            }
            let s = self.scale(*a, p, T::half()).norm();
            acc += s * s;
        }
        acc.sqrt()
    }
}

/// A truncated expansion together with a bound on the discarded norm mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion<T: Real> {
    pub series: TruncatedSeries<T>,
    pub tail: T,
}

impl<T: Real> SpaceModel<T> {
    pub fn new(kind: SpaceKind<T>) -> Result<Self> {
        match kind {
            SpaceKind::Fock { gamma } if !(gamma > T::zero() && gamma.is_finite()) => {
                return Err(Error::domain(format!("Fock space requires gamma > 0, got {gamma}")));
            }
            SpaceKind::Disc { n } if n <= 2 => {
                return Err(Error::domain(format!("disc space requires n > 2, got {n}")));
            }
            SpaceKind::Poly { m } if m < 1 => {
                return Err(Error::domain("polynomial space requires m >= 1"));
            }
            _ => {}
        }
        Ok(SpaceModel {
            kind,
            truncation: DEFAULT_TRUNCATION,
            disc_margin: T::lit(DEFAULT_DISC_MARGIN),
        })
    }

    pub fn fock(gamma: T) -> Result<Self> {
        Self::new(SpaceKind::Fock { gamma })
    }

    pub fn disc(n: u32) -> Result<Self> {
        Self::new(SpaceKind::Disc { n })
    }

    pub fn poly(m: u32) -> Result<Self> {
        Self::new(SpaceKind::Poly { m })
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_disc_margin(mut self, margin: T) -> Self {
        self.disc_margin = margin;
        self
    }

    pub fn kind(&self) -> SpaceKind<T> {
        self.kind
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn disc_margin(&self) -> T {
        self.disc_margin
    }

    /// Highest monomial degree carried: `P`, or `min(P, m)` for Poly.
    pub fn working_degree(&self) -> usize {
        match self.kind {
            SpaceKind::Poly { m } => self.truncation.min(m as usize),
            _ => self.truncation,
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            SpaceKind::Fock { gamma } => format!("fock(gamma={gamma})"),
            SpaceKind::Disc { n } => format!("disc(n={n})"),
            SpaceKind::Poly { m } => format!("poly(m={m})"),
        }
    }

    /// `c_p` for `p < len`.
    pub fn weights(&self, len: usize) -> DiagonalWeights<T> {
        let mut c = Vec::with_capacity(len);
        let mut ln_c = Vec::with_capacity(len);
        let (mut cp, mut lp) = (T::one(), T::zero());
        for p in 0..len {
            c.push(cp);
            ln_c.push(lp);
            match self.next_weight_ratio(p) {
                Some(ratio) => {
                    cp *= ratio;
                    lp += ratio.ln();
                }
                None => {
                    cp = T::infinity();
                    lp = T::infinity();
                }
            }
        }
        DiagonalWeights { c, ln_c }
    }

    /// `c_{p+1} / c_p`, `None` past the top of a polynomial space.
    fn next_weight_ratio(&self, p: usize) -> Option<T> {
        let pp = T::from_usize_lossy(p);
        match self.kind {
            SpaceKind::Fock { gamma } => Some(T::two() * gamma * (pp + T::one())),
            SpaceKind::Disc { n } => Some((pp + T::one()) / (T::from_u32(n).unwrap() + pp)),
            SpaceKind::Poly { m } => {
                if p < m as usize {
                    Some((pp + T::one()) / (T::from_u32(m).unwrap() - pp))
                } else {
                    None
                }
            }
        }
    }

    /// `K(z) = k(z, z)`.
    pub fn kernel_weight(&self, z: Cx<T>) -> T {
        let r2 = z.norm_sqr();
        match self.kind {
            SpaceKind::Fock { gamma } => (r2 / (T::two() * gamma)).exp(),
            SpaceKind::Disc { n } => (T::one() - r2).powi(-(n as i32)),
            SpaceKind::Poly { m } => (T::one() + r2).powi(m as i32),
        }
    }

    /// Reproducing kernel `k(z, w) = <e_w, e_z>` in closed form.
    pub fn kernel(&self, z: Cx<T>, w: Cx<T>) -> Cx<T> {
        let zw = z * w.conj();
        match self.kind {
            SpaceKind::Fock { gamma } => (zw / (T::two() * gamma)).exp(),
            SpaceKind::Disc { n } => crate::scalar::powi_cx(re(T::one()) - zw, -(n as i64)),
            SpaceKind::Poly { m } => crate::scalar::powi_cx(re(T::one()) + zw, m as i64),
        }
    }

    /// Density of the norm measure against Lebesgue measure, `K(z)^{-1} delta(z)`.
    pub fn measure_density(&self, z: Cx<T>) -> T {
        let r2 = z.norm_sqr();
        let pi = T::PI();
        match self.kind {
            SpaceKind::Fock { gamma } => (-r2 / (T::two() * gamma)).exp() / (T::two() * pi * gamma),
            SpaceKind::Disc { n } => {
                if r2 >= T::one() {
                    return T::zero();
                }
                let nn = T::from_u32(n).unwrap();
                (nn - T::one()) / pi * (T::one() - r2).powi(n as i32 - 2)
            }
            SpaceKind::Poly { m } => {
                let mm = T::from_u32(m).unwrap();
                (mm + T::one()) / pi * (T::one() + r2).powi(-(m as i32) - 2)
            }
        }
    }

    /// Invariant measure density `delta(z)` against Lebesgue measure.
    pub fn invariant_density(&self, z: Cx<T>) -> T {
        self.measure_density(z) * self.kernel_weight(z)
    }

    /// Whether `z` lies in the domain of the space.
    pub fn contains(&self, z: Cx<T>) -> bool {
        match self.kind {
            SpaceKind::Disc { .. } => z.norm() < T::one(),
            _ => z.re.is_finite() && z.im.is_finite(),
        }
    }

    /// Whether coherent-state computations at `z` meet the precision margin.
    pub fn is_admissible(&self, z: Cx<T>) -> bool {
        match self.kind {
            SpaceKind::Disc { .. } => z.norm() <= T::one() - self.disc_margin,
            _ => self.contains(z),
        }
    }

    /// Inner product `sum_p f_p conj(g_p) c_p`.
    pub fn inner_product(&self, f: &TruncatedSeries<T>, g: &TruncatedSeries<T>) -> Result<Cx<T>> {
        let len = f.cap().max(g.cap()) + 1;
        let w = self.weights(len);
        let mut acc = Cx::zero();
        for p in 0..len {
            let (a, b) = (f.coeff(p), g.coeff(p));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            if !w.defined(p) {
                return Err(Error::domain(format!(
                    "degree {p} exceeds the polynomial space {}",
                    self.name()
                )));
            }
            acc += w.weighted_product(a, b, p);
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self, f: &TruncatedSeries<T>) -> Result<T> {
        Ok(self.inner_product(f, f)?.re)
    }

    /// Checks that `f` is a legal element (Poly degree bound).
    pub fn check_member(&self, f: &TruncatedSeries<T>) -> Result<()> {
        if let SpaceKind::Poly { m } = self.kind {
            if let Some(d) = f.degree() {
                if d > m as usize {
                    return Err(Error::domain(format!("degree {d} exceeds m = {m}")));
                }
            }
        }
        Ok(())
    }

    /// Coordinates in the orthonormal basis `z^p / sqrt(c_p)`.
    pub fn to_orthonormal(&self, f: &TruncatedSeries<T>) -> Result<Vec<Cx<T>>> {
        self.check_member(f)?;
        let len = match self.kind {
            SpaceKind::Poly { m } => (f.cap() + 1).min(m as usize + 1),
            _ => f.cap() + 1,
        };
        let w = self.weights(len);
        Ok((0..len).map(|p| w.scale(f.coeff(p), p, T::half())).collect())
    }

    /// Inverse of [`SpaceModel::to_orthonormal`].
    pub fn from_orthonormal(&self, v: &[Cx<T>]) -> TruncatedSeries<T> {
        let w = self.weights(v.len());
        TruncatedSeries::new(
            v.iter()
                .enumerate()
                .map(|(p, &a)| w.scale(a, p, -T::half()))
                .collect(),
        )
    }

    /// Unit basis vector `z^p / sqrt(c_p)` with capacity `cap`.
    pub fn basis_vector(&self, p: usize, cap: usize) -> TruncatedSeries<T> {
        let w = self.weights(p + 1);
        let mut s = TruncatedSeries::zeros(cap.max(p));
        s.coeffs_mut()[p] = w.scale(re(T::one()), p, -T::half());
        s
    }

    /// Coherent state `e_z` truncated at the working degree, with the norm of
    /// the discarded tail.
    pub fn coherent_state(&self, z: Cx<T>) -> Result<Expansion<T>> {
        self.coherent_state_with(z, self.working_degree())
    }

    pub fn coherent_state_with(&self, z: Cx<T>, cap: usize) -> Result<Expansion<T>> {
        if !self.contains(z) {
            return Err(Error::domain(format!("{z} outside the domain of {}", self.name())));
        }
        let cap = match self.kind {
            SpaceKind::Poly { m } => cap.min(m as usize),
            _ => cap,
        };
        let zc = z.conj();
        let x = z.norm_sqr();
        let mut coeffs = Vec::with_capacity(cap + 1);
        let mut e = re(T::one());
        // term_p = |z|^{2p} / c_p, the norm mass carried by degree p
        let mut term = T::one();
        for p in 0..=cap {
            coeffs.push(e);
            match self.next_weight_ratio(p) {
                Some(ratio) => {
                    e = e * zc / ratio;
                    term = term * x / ratio;
                }
                None => {
                    e = Cx::zero();
                    term = T::zero();
                }
            }
        }
        let tail = self.series_tail(term, cap + 1, x).sqrt();
        let series = TruncatedSeries::new(coeffs);
        if !self.is_admissible(z) {
            return Err(Error::Precision {
                message: format!(
                    "|z| = {} exceeds 1 - margin ({}) for {}",
                    z.norm(),
                    self.disc_margin,
                    self.name()
                ),
                tail: tail.to_f64_lossy(),
            });
        }
        Ok(Expansion { series, tail })
    }

    /// Sums `term_p` for `p >= start` given `term_start`, with a geometric
    /// remainder bound once the ratio of successive terms is below one.
    fn series_tail(&self, first: T, start: usize, x: T) -> T {
        let mut sum = T::zero();
        let mut term = first;
        let mut p = start;
        let eps = T::epsilon() * T::lit(1e-3);
        for _ in 0..1_000_000 {
            if term == T::zero() {
                return sum;
            }
            sum += term;
            let Some(ratio) = self.next_weight_ratio(p) else {
                return sum;
            };
            let rho = x / ratio;
            term *= rho;
            p += 1;
            // ratios are nonincreasing in p for all three families
            if rho < T::one() {
                let bound = term / (T::one() - rho);
                if bound <= eps * sum {
                    return sum + bound;
                }
            }
        }
        T::infinity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type S = TruncatedSeries<f64>;

    #[test]
    fn parameter_validation() {
        assert!(SpaceModel::<f64>::fock(0.0).is_err());
        assert!(SpaceModel::<f64>::fock(-1.0).is_err());
        assert!(SpaceModel::<f64>::disc(2).is_err());
        assert!(SpaceModel::<f64>::disc(3).is_ok());
        assert!(SpaceModel::<f64>::poly(0).is_err());
    }

    #[test]
    fn fock_z_norm() {
        let fock = SpaceModel::fock(1.0).unwrap();
        let z = S::monomial(1, 1);
        assert_eq!(fock.inner_product(&z, &z).unwrap(), cx(2.0, 0.0));
        let one = S::constant(cx(1.0, 0.0), 1);
        assert_eq!(fock.inner_product(&one, &z).unwrap(), cx(0.0, 0.0));
    }

    #[test]
    fn disc_and_poly_weights() {
        let disc = SpaceModel::<f64>::disc(3).unwrap();
        let z2 = S::monomial(2, 2);
        assert!((disc.inner_product(&z2, &z2).unwrap().re - 1.0 / 6.0).abs() < 1e-15);
        let poly = SpaceModel::<f64>::poly(3).unwrap();
        let w = poly.weights(6);
        assert!((w.c(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((w.c(3) - 1.0).abs() < 1e-15);
        assert!(!w.defined(4));
    }

    #[test]
    fn poly_degree_overflow_is_domain_error() {
        let poly = SpaceModel::<f64>::poly(2).unwrap();
        let z3 = S::monomial(3, 3);
        assert!(matches!(poly.inner_product(&z3, &z3), Err(Error::Domain(_))));
    }

    #[test]
    fn hermitian_symmetry() {
        let disc = SpaceModel::<f64>::disc(5).unwrap();
        let f = S::new(vec![cx(1.0, 2.0), cx(-0.5, 0.1), cx(0.3, 0.3)]);
        let g = S::new(vec![cx(0.2, -1.0), cx(0.7, 0.0), cx(0.0, 1.5)]);
        let a = disc.inner_product(&f, &g).unwrap();
        let b = disc.inner_product(&g, &f).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn coherent_state_examples() {
        let fock = SpaceModel::fock(0.7).unwrap();
        let e0 = fock.coherent_state(Cx::zero()).unwrap();
        assert_eq!(e0.series.degree(), Some(0));
        assert_eq!(e0.series.coeff(0), cx(1.0, 0.0));

        let poly = SpaceModel::<f64>::poly(2).unwrap();
        let e1 = poly.coherent_state(cx(1.0, 0.0)).unwrap();
        assert_eq!(e1.series.coeffs(), &[cx(1.0, 0.0), cx(2.0, 0.0), cx(1.0, 0.0)]);
        assert_eq!(e1.tail, 0.0);

        let disc = SpaceModel::<f64>::disc(3).unwrap();
        let e = disc.coherent_state(cx(0.5, 0.0)).unwrap();
        for p in 0..10u64 {
            let expected = crate::scalar::binomial::<f64>(p + 2, p) * 0.5f64.powi(p as i32);
            assert!((e.series.coeff(p as usize).re - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn fock_coherent_state_reproduces_kernel_weight() {
        let fock = SpaceModel::fock(1.0).unwrap();
        let e = fock.coherent_state(cx(2.0, 0.0)).unwrap();
        let v = e.series.evaluate(cx(2.0, 0.0));
        assert!((v.re - 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn disc_margin_violation_reports_tail() {
        let disc = SpaceModel::<f64>::disc(4).unwrap();
        match disc.coherent_state(cx(0.95, 0.0)) {
            Err(Error::Precision { tail, .. }) => assert!(tail > 0.0),
            other => panic!("expected precision error, got {other:?}"),
        }
        assert!(disc.coherent_state(cx(1.0, 0.0)).is_err());
    }

    #[test]
    fn tail_matches_norm_deficit() {
        let disc = SpaceModel::<f64>::disc(3).unwrap().with_truncation(40);
        let z = cx(0.6, 0.2);
        let e = disc.coherent_state(z).unwrap();
        let partial = disc.norm_sqr(&e.series).unwrap();
        let deficit = disc.kernel_weight(z) - partial;
        assert!((e.tail * e.tail - deficit).abs() < 1e-12 * disc.kernel_weight(z));
    }

    #[test]
    fn orthonormal_round_trip() {
        let fock = SpaceModel::fock(1.5).unwrap();
        let f = S::new(vec![cx(1.0, 0.0), cx(0.0, 2.0), cx(-3.0, 1.0)]);
        let v = fock.to_orthonormal(&f).unwrap();
        let back = fock.from_orthonormal(&v);
        assert!((&back - &f).max_abs() < 1e-14);
        let nrm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        assert!((nrm - fock.norm_sqr(&f).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn huge_weights_do_not_overflow() {
        let poly = SpaceModel::<f64>::poly(10_000).unwrap();
        let w = poly.weights(5001);
        assert_eq!(w.c(5000), 0.0);
        assert!(w.ln_c(5000).is_finite());
        let fock = SpaceModel::<f64>::fock(1.0).unwrap().with_truncation(200);
        let b = fock.basis_vector(200, 200);
        assert!((fock.norm_sqr(&b).unwrap() - 1.0).abs() < 1e-10);
    }
}
