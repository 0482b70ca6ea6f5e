use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{re, Cx, Real};

/// Taylor coefficients `a_0..=a_P` of a holomorphic function at the origin.
///
/// The truncation degree `P` is the capacity of the coefficient vector; the
/// actual degree is the index of the highest nonzero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T: Real> {
    coeffs: Vec<Cx<T>>,
}

/// Coefficients dropped when a series is clipped to a lower capacity.
///
/// `first_index` is the power of the first dropped coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Clipped<T: Real> {
    pub first_index: usize,
    pub coeffs: Vec<Cx<T>>,
}

impl<T: Real> Clipped<T> {
    pub fn none(first_index: usize) -> Self {
        Clipped {
            first_index,
            coeffs: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<T: Real> TruncatedSeries<T> {
    /// Builds a series from its coefficients; an empty vector is the zero constant.
    pub fn new(mut coeffs: Vec<Cx<T>>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Cx::zero());
        }
        TruncatedSeries { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| re(c)).collect())
    }

    pub fn zeros(cap: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Cx::zero(); cap + 1],
        }
    }

    pub fn constant(c: Cx<T>, cap: usize) -> Self {
        let mut s = Self::zeros(cap);
        s.coeffs[0] = c;
        s
    }

    /// `z^k` with capacity `max(k, cap)`.
    pub fn monomial(k: usize, cap: usize) -> Self {
        let mut s = Self::zeros(cap.max(k));
        s.coeffs[k] = re(T::one());
        s
    }

    /// Truncation degree `P`.
    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Cx<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cx<T>> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero above the capacity.
    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Cx::zero)
    }

    /// Index of the highest nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Horner evaluation of the truncated sum.
    pub fn evaluate(&self, z: Cx<T>) -> Cx<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Cx::zero(), |acc, &a| acc * z + a)
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&a| a * s).collect(),
        }
    }

    /// Changes the capacity, returning the coefficients that no longer fit.
    pub fn resized(&self, cap: usize) -> (Self, Clipped<T>) {
        let mut coeffs = self.coeffs.clone();
        let dropped = if coeffs.len() > cap + 1 {
            coeffs.split_off(cap + 1)
        } else {
            coeffs.resize(cap + 1, Cx::zero());
            Vec::new()
        };
        (
            TruncatedSeries { coeffs },
            Clipped {
                first_index: cap + 1,
                coeffs: dropped,
            },
        )
    }

    /// Truncated Cauchy product, coefficients above `cap` are discarded.
    pub fn mul_trunc(&self, rhs: &Self, cap: usize) -> Self {
        let mut out = vec![Cx::zero(); cap + 1];
        let (Some(da), Some(db)) = (self.degree(), rhs.degree()) else {
            return TruncatedSeries { coeffs: out };
        };
        for i in 0..=da.min(cap) {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..=db.min(cap - i) {
                out[i + j] += a * rhs.coeffs[j];
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Product clipped at `cap`, returning the exact higher coefficients it drops.
    pub fn mul_clipped(&self, rhs: &Self, cap: usize) -> (Self, Clipped<T>) {
        let full_deg = match (self.degree(), rhs.degree()) {
            (Some(a), Some(b)) => a + b,
            _ => 0,
        };
        self.mul_trunc(rhs, full_deg.max(cap)).resized(cap)
    }

    /// `f'` with the same capacity.
    pub fn derivative(&self) -> Self {
        let cap = self.cap();
        let mut out = vec![Cx::zero(); cap + 1];
        for k in 1..=cap {
            out[k - 1] = self.coeffs[k] * T::from_usize_lossy(k);
        }
        TruncatedSeries { coeffs: out }
    }

    /// `z^s f` with capacity raised by `s`, so nothing is lost.
    pub fn shift_up(&self, s: usize) -> Self {
        let mut out = vec![Cx::zero(); s];
        out.extend_from_slice(&self.coeffs);
        TruncatedSeries { coeffs: out }
    }

    /// Composition `f(inner(z))` truncated at `cap` by Horner's scheme.
    ///
    /// `self` is treated as the polynomial given by its coefficients, so the
    /// result is exact through degree `cap` even when `inner(0) != 0`.
    pub fn compose(&self, inner: &Self, cap: usize) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zeros(cap);
        };
        let mut acc = Self::constant(self.coeffs[deg], cap);
        for k in (0..deg).rev() {
            acc = acc.mul_trunc(inner, cap);
            acc.coeffs[0] += self.coeffs[k];
        }
        acc
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| if c.norm() > m { c.norm() } else { m })
    }
}

fn zip_with<T: Real>(
    a: &TruncatedSeries<T>,
    b: &TruncatedSeries<T>,
    f: impl Fn(Cx<T>, Cx<T>) -> Cx<T>,
) -> TruncatedSeries<T> {
    let cap = a.cap().max(b.cap());
    TruncatedSeries {
        coeffs: (0..=cap).map(|k| f(a.coeff(k), b.coeff(k))).collect(),
    }
}

impl<T: Real> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<T: Real> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn neg(self) -> TruncatedSeries<T> {
        self.scale(re(-T::one()))
    }
}
