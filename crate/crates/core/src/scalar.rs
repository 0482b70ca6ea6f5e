//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar (f32 or f64).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an f64 literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn i_unit<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

/// `ln(1 + w)` without cancellation for small `w`.
pub fn ln_1p_cx<T: Real>(w: Cx<T>) -> Cx<T> {
    let modulus = (T::two() * w.re + w.norm_sqr()).ln_1p() * T::half();
    let arg = w.im.atan2(T::one() + w.re);
    Complex::new(modulus, arg)
}

/// Integer power of a complex base via `exp(k ln z)`.
///
/// Integer exponents make the principal branch irrelevant, and the log form
/// stays finite for the large exponents used along contraction schedules.
pub fn powi_cx<T: Real>(base: Cx<T>, k: i64) -> Cx<T> {
    if k == 0 {
        return re(T::one());
    }
    let kk = T::from_i64(k).expect("exponent representable");
    (base.ln() * kk).exp()
}

/// Natural log of the binomial coefficient `C(n, k)` by accumulated ratios.
pub fn ln_binomial<T: Real>(n: u64, k: u64) -> T {
    if k > n {
        return T::neg_infinity();
    }
    let k = k.min(n - k);
    let mut acc = T::zero();
    for j in 1..=k {
        let num = T::from_u64(n - k + j).unwrap();
        let den = T::from_u64(j).unwrap();
        acc += (num / den).ln();
    }
    acc
}

/// Binomial coefficient as a float (may overflow to infinity).
pub fn binomial<T: Real>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for j in 1..=k {
        acc = acc * T::from_u64(n - k + j).unwrap() / T::from_u64(j).unwrap();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial::<f64>(4, 2), 6.0);
        assert_eq!(binomial::<f64>(10, 0), 1.0);
        assert_eq!(binomial::<f64>(3, 5), 0.0);
        assert!((ln_binomial::<f64>(10, 3) - 120f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn ln_1p_matches_direct_for_moderate_arguments() {
        let w = cx(0.3, -0.2);
        let d = (re(1.0) + w).ln();
        assert!((ln_1p_cx(w) - d).norm() < 1e-15);
        let tiny = cx(1e-17, 2e-17);
        assert!((ln_1p_cx(tiny) - tiny).norm() < 1e-30);
    }

    #[test]
    fn integer_powers_ignore_branch() {
        let z = cx(-0.7f64, 0.4);
        let direct = z * z * z * z * z;
        assert!((powi_cx(z, 5) - direct).norm() < 1e-14);
        assert!((powi_cx(z, -3) - (z * z * z).inv()).norm() < 1e-13);
    }
}
