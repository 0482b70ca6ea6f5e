//! The Heisenberg group, SU(1,1) and SU(2), their Lie algebras in the bases
//! `(v_i)`, `(u_i)`, `(u'_i)`, exponentials, actions and adjoint matrices.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cx, re, Cx, Real};

/// Complex 2x2 matrix, row major.
pub type Mat2<T> = [[Cx<T>; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixGroup {
    SU11,
    SU2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Heis,
    Su11,
    Su2,
}

impl MatrixGroup {
    pub fn algebra(self) -> Algebra {
        match self {
            MatrixGroup::SU11 => Algebra::Su11,
            MatrixGroup::SU2 => Algebra::Su2,
        }
    }
}

/// `[a1, a2, a3]` in exponential coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct HeisenbergElement<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
}

/// `g(a, b)`; the group tag fixes the sign of the lower-left entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2Element<T> {
    pub a: Cx<T>,
    pub b: Cx<T>,
    pub group: MatrixGroup,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupElement<T> {
    Heis(HeisenbergElement<T>),
    Matrix(Matrix2Element<T>),
}

/// `x1 e_1 + x2 e_2 + x3 e_3` in the basis selected by `algebra`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraVector<T> {
    pub x: [T; 3],
    pub algebra: Algebra,
}

impl<T: Real> HeisenbergElement<T> {
    pub fn new(a1: T, a2: T, a3: T) -> Self {
        HeisenbergElement { a1, a2, a3 }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.a1, -self.a2, -self.a3)
    }

    pub fn coords(&self) -> [T; 3] {
        [self.a1, self.a2, self.a3]
    }

    /// `g . z = z + gamma (a2 - i a1)`.
    pub fn act(&self, gamma: T, z: Cx<T>) -> Cx<T> {
        z + cx(self.a2, -self.a1) * gamma
    }
}

pub fn heis_mul<T: Real>(g: &HeisenbergElement<T>, h: &HeisenbergElement<T>) -> HeisenbergElement<T> {
    HeisenbergElement::new(
        g.a1 + h.a1,
        g.a2 + h.a2,
        g.a3 + h.a3 + T::half() * (g.a1 * h.a2 - g.a2 * h.a1),
    )
}

pub fn heis_exp<T: Real>(x: &AlgebraVector<T>) -> Result<HeisenbergElement<T>> {
    if x.algebra != Algebra::Heis {
        return Err(Error::mismatch("heis_exp needs a Heisenberg algebra vector"));
    }
    Ok(HeisenbergElement::new(x.x[0], x.x[1], x.x[2]))
}

impl<T: Real> Matrix2Element<T> {
    /// Checked constructor: the defining constraint must hold to `1e-10` relative.
    pub fn new(a: Cx<T>, b: Cx<T>, group: MatrixGroup) -> Result<Self> {
        let g = Matrix2Element { a, b, group };
        let scale = T::one().max(a.norm_sqr() + b.norm_sqr());
        if (g.constraint() - T::one()).abs() > T::lit(1e-10) * scale {
            return Err(Error::domain(format!(
                "g({a}, {b}) violates the {group:?} constraint: {}",
                g.constraint()
            )));
        }
        Ok(g)
    }

    /// Constructor without the constraint check.
    pub fn new_unchecked(a: Cx<T>, b: Cx<T>, group: MatrixGroup) -> Self {
        Matrix2Element { a, b, group }
    }

    pub fn identity(group: MatrixGroup) -> Self {
        Matrix2Element {
            a: re(T::one()),
            b: Cx::zero(),
            group,
        }
    }

    /// `|a|^2 - |b|^2` for SU11, `|a|^2 + |b|^2` for SU2.
    pub fn constraint(&self) -> T {
        match self.group {
            MatrixGroup::SU11 => self.a.norm_sqr() - self.b.norm_sqr(),
            MatrixGroup::SU2 => self.a.norm_sqr() + self.b.norm_sqr(),
        }
    }

    pub fn inverse(&self) -> Self {
        Matrix2Element {
            a: self.a.conj(),
            b: -self.b,
            group: self.group,
        }
    }

    pub fn to_matrix(&self) -> Mat2<T> {
        let c = match self.group {
            MatrixGroup::SU11 => self.b.conj(),
            MatrixGroup::SU2 => -self.b.conj(),
        };
        [[self.a, self.b], [c, self.a.conj()]]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::mismatch("product of elements of different groups"));
        }
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        let a_new = match self.group {
            MatrixGroup::SU11 => a * c + b * d.conj(),
            MatrixGroup::SU2 => a * c - b * d.conj(),
        };
        Ok(Matrix2Element {
            a: a_new,
            b: a * d + b * c.conj(),
            group: self.group,
        })
    }

    /// SU11: `(az + b) / (conj(b) z + conj(a))` on the disc.
    /// SU2: `(az + b) / (-conj(b) z + conj(a))`, so that `g^{-1}` maps
    /// `z` to `(conj(a) z - b) / (conj(b) z + a)`.
    pub fn act(&self, z: Cx<T>) -> Result<Cx<T>> {
        let (num, den) = match self.group {
            MatrixGroup::SU11 => {
                if z.norm() >= T::one() {
                    return Err(Error::domain(format!("{z} outside the unit disc")));
                }
                (self.a * z + self.b, self.b.conj() * z + self.a.conj())
            }
            MatrixGroup::SU2 => (self.a * z + self.b, -self.b.conj() * z + self.a.conj()),
        };
        if den.norm() <= T::epsilon() * (num.norm() + T::one()) {
            return Err(Error::Pole(format!("g({}, {}) has a pole at {z}", self.a, self.b)));
        }
        Ok(num / den)
    }
}

impl<T: Real> GroupElement<T> {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (GroupElement::Heis(g), GroupElement::Heis(h)) => Ok(GroupElement::Heis(heis_mul(g, h))),
            (GroupElement::Matrix(g), GroupElement::Matrix(h)) => Ok(GroupElement::Matrix(g.mul(h)?)),
            _ => Err(Error::mismatch("product of elements of different groups")),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Heis(g) => GroupElement::Heis(g.inverse()),
            GroupElement::Matrix(g) => GroupElement::Matrix(g.inverse()),
        }
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            GroupElement::Heis(_) => Algebra::Heis,
            GroupElement::Matrix(g) => g.group.algebra(),
        }
    }

    /// Action on the domain; `gamma` is used only by the Heisenberg group.
    pub fn act(&self, gamma: T, z: Cx<T>) -> Result<Cx<T>> {
        match self {
            GroupElement::Heis(g) => Ok(g.act(gamma, z)),
            GroupElement::Matrix(g) => g.act(z),
        }
    }
}

impl<T: Real> From<HeisenbergElement<T>> for GroupElement<T> {
    fn from(g: HeisenbergElement<T>) -> Self {
        GroupElement::Heis(g)
    }
}

impl<T: Real> From<Matrix2Element<T>> for GroupElement<T> {
    fn from(g: Matrix2Element<T>) -> Self {
        GroupElement::Matrix(g)
    }
}

impl<T: Real> AlgebraVector<T> {
    pub fn new(algebra: Algebra, x1: T, x2: T, x3: T) -> Self {
        AlgebraVector {
            x: [x1, x2, x3],
            algebra,
        }
    }

    pub fn heis(x1: T, x2: T, x3: T) -> Self {
        Self::new(Algebra::Heis, x1, x2, x3)
    }

    pub fn su11(x1: T, x2: T, x3: T) -> Self {
        Self::new(Algebra::Su11, x1, x2, x3)
    }

    pub fn su2(x1: T, x2: T, x3: T) -> Self {
        Self::new(Algebra::Su2, x1, x2, x3)
    }

    /// The `i`-th basis vector (`i` in `0..3`).
    pub fn basis(algebra: Algebra, i: usize) -> Self {
        let mut x = [T::zero(); 3];
        x[i] = T::one();
        AlgebraVector { x, algebra }
    }

    pub fn scale(&self, s: T) -> Self {
        AlgebraVector {
            x: self.x.map(|v| v * s),
            algebra: self.algebra,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::mismatch("sum of vectors in different algebras"));
        }
        Ok(AlgebraVector {
            x: [0, 1, 2].map(|i| self.x[i] + other.x[i]),
            algebra: self.algebra,
        })
    }

    /// The 2x2 matrix of a vector of su(1,1) or su(2).
    pub fn to_matrix(&self) -> Result<Mat2<T>> {
        let h = T::half();
        let [x1, x2, x3] = self.x;
        match self.algebra {
            Algebra::Heis => Err(Error::domain("the Heisenberg algebra has no 2x2 model")),
            // x1 u1 + x2 u2 + x3 u3 = [[a i, beta], [conj(beta), -a i]]
            Algebra::Su11 => {
                let beta = cx(x2, -x1) * h;
                Ok([[cx(T::zero(), -x3 * h), beta], [beta.conj(), cx(T::zero(), x3 * h)]])
            }
            Algebra::Su2 => Ok([
                [cx(T::zero(), x3 * h), cx(-x2, x1) * h],
                [cx(x2, x1) * h, cx(T::zero(), -x3 * h)],
            ]),
        }
    }

    /// Coordinates of a traceless matrix of the given algebra.
    pub fn from_matrix(algebra: Algebra, m: &Mat2<T>) -> Result<Self> {
        let two = T::two();
        match algebra {
            Algebra::Heis => Err(Error::domain("the Heisenberg algebra has no 2x2 model")),
            Algebra::Su11 => Ok(Self::su11(-two * m[0][1].im, two * m[0][1].re, -two * m[0][0].im)),
            Algebra::Su2 => Ok(Self::su2(two * m[0][1].im, -two * m[0][1].re, two * m[0][0].im)),
        }
    }

    /// `x1^2 + x2^2 - x3^2` on su(1,1), `x1^2 + x2^2 + x3^2` on su(2): the
    /// Ad-invariant quadratic form (up to a constant factor).
    pub fn invariant_form(&self) -> T {
        let [x1, x2, x3] = self.x;
        match self.algebra {
            Algebra::Su11 => x1 * x1 + x2 * x2 - x3 * x3,
            _ => x1 * x1 + x2 * x2 + x3 * x3,
        }
    }
}

pub fn mat_mul<T: Real>(p: &Mat2<T>, q: &Mat2<T>) -> Mat2<T> {
    let mut out = [[Cx::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    out
}

fn mat_sub<T: Real>(p: &Mat2<T>, q: &Mat2<T>) -> Mat2<T> {
    [[p[0][0] - q[0][0], p[0][1] - q[0][1]], [p[1][0] - q[1][0], p[1][1] - q[1][1]]]
}

/// Entrywise maximum modulus of `p - q`.
pub fn mat_dist<T: Real>(p: &Mat2<T>, q: &Mat2<T>) -> T {
    mat_sub(p, q)
        .iter()
        .flatten()
        .fold(T::zero(), |m, c| m.max(c.norm()))
}

/// Reference exponential by scaling, Taylor series and squaring, for any 2x2 matrix.
pub fn expm_series<T: Real>(m: &Mat2<T>) -> Mat2<T> {
    let norm = m.iter().flatten().fold(T::zero(), |s, c| s + c.norm());
    let mut squarings = 0;
    let mut scale = T::one();
    while norm * scale > T::half() {
        scale *= T::half();
        squarings += 1;
    }
    let a = m.map(|row| row.map(|c| c * scale));
    let mut out = [[re(T::one()), Cx::zero()], [Cx::zero(), re(T::one())]];
    let mut term = out;
    for k in 1..30 {
        term = mat_mul(&term, &a).map(|row| row.map(|c| c / T::from_usize_lossy(k)));
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        out = mat_mul(&out, &out);
    }
    out
}

const SMALL_ARGUMENT: f64 = 1e-4;

/// `C(x) = cosh(sqrt(x))` continued to `x < 0` as `cos(sqrt(-x))`.
pub fn entire_c<T: Real>(x: T) -> T {
    if x.abs() < T::lit(SMALL_ARGUMENT) {
        // sum x^k / (2k)!
        let mut term = T::one();
        let mut acc = T::one();
        for k in 1..8usize {
            term = term * x / T::from_usize_lossy((2 * k - 1) * (2 * k));
            acc += term;
        }
        return acc;
    }
    if x > T::zero() {
        x.sqrt().cosh()
    } else {
        (-x).sqrt().cos()
    }
}

/// `S(x) = sinh(sqrt(x)) / sqrt(x)` continued to `x < 0` as `sin(sqrt(-x)) / sqrt(-x)`.
pub fn entire_s<T: Real>(x: T) -> T {
    if x.abs() < T::lit(SMALL_ARGUMENT) {
        // sum x^k / (2k+1)!
        let mut term = T::one();
        let mut acc = T::one();
        for k in 1..8usize {
            term = term * x / T::from_usize_lossy((2 * k) * (2 * k + 1));
            acc += term;
        }
        return acc;
    }
    if x > T::zero() {
        let s = x.sqrt();
        s.sinh() / s
    } else {
        let s = (-x).sqrt();
        s.sin() / s
    }
}

/// Squared "radius" `x` with `X^2 = x I`: `R^2 = |beta|^2 - a^2` on su(1,1),
/// `-(x1^2 + x2^2 + x3^2) / 4` on su(2).
pub fn exp_radius_sqr<T: Real>(x: &AlgebraVector<T>) -> T {
    let q = T::lit(0.25);
    let [x1, x2, x3] = x.x;
    match x.algebra {
        Algebra::Su11 => q * (x1 * x1 + x2 * x2 - x3 * x3),
        _ => -q * (x1 * x1 + x2 * x2 + x3 * x3),
    }
}

/// `exp(X) = C(x) I + S(x) X` for a traceless `X` with `X^2 = x I`.
pub fn matrix_exp<T: Real>(x: &AlgebraVector<T>) -> Result<Matrix2Element<T>> {
    let group = match x.algebra {
        Algebra::Su11 => MatrixGroup::SU11,
        Algebra::Su2 => MatrixGroup::SU2,
        Algebra::Heis => return Err(Error::domain("use heis_exp for the Heisenberg algebra")),
    };
    let m = x.to_matrix()?;
    let r2 = exp_radius_sqr(x);
    let (c, s) = (entire_c(r2), entire_s(r2));
    Ok(Matrix2Element {
        a: re(c) + m[0][0] * s,
        b: m[0][1] * s,
        group,
    })
}

/// Inverse of [`matrix_exp`] on the image of the principal branch.
///
/// SU(2) elements with `a = -1` and SU(1,1) elements with `Re a <= -1` are
/// outside the principal domain and return a domain error.
pub fn matrix_log<T: Real>(g: &Matrix2Element<T>) -> Result<AlgebraVector<T>> {
    let algebra = g.group.algebra();
    let c = g.a.re;
    // S X = g - C I has diagonal (i Im a, -i Im a) and off-diagonal b
    let s_x: Mat2<T> = {
        let m = g.to_matrix();
        [[m[0][0] - re(c), m[0][1]], [m[1][0], m[1][1] - re(c)]]
    };
    let v = match g.group {
        MatrixGroup::SU11 => g.b.norm_sqr() - g.a.im * g.a.im,
        MatrixGroup::SU2 => -(g.b.norm_sqr() + g.a.im * g.a.im),
    };
    let s = if v.abs() <= T::epsilon() * T::lit(16.0) {
        T::one()
    } else if v > T::zero() {
        if c <= T::zero() {
            return Err(Error::domain("hyperbolic element outside the image of exp"));
        }
        let r = v.sqrt().asinh();
        r.sinh() / r
    } else {
        let theta = (-v).sqrt().atan2(c);
        if (T::PI() - theta).abs() < T::lit(1e-12) {
            return Err(Error::domain("element at the cut locus of the exponential"));
        }
        theta.sin() / theta
    };
    AlgebraVector::from_matrix(algebra, &s_x.map(|row| row.map(|e| e / s)))
}

/// The section with `g_z . 0 = z` exactly as displayed,
/// `g((1 - |z|)^{-1/2}, (1 - |z|)^{-1/2} z)`, which satisfies
/// `|a|^2 - |b|^2 = 1 + |z|` rather than 1.
pub fn section_gz_displayed<T: Real>(z: Cx<T>) -> Result<Matrix2Element<T>> {
    let r = z.norm();
    if r >= T::one() {
        return Err(Error::domain(format!("section needs |z| < 1, got {z}")));
    }
    let a = (T::one() - r).powf(-T::half());
    Ok(Matrix2Element::new_unchecked(re(a), z * a, MatrixGroup::SU11))
}

/// The displayed section rescaled by `(1 + |z|)^{-1/2}` onto SU(1,1), which
/// is `g((1 - |z|^2)^{-1/2}, (1 - |z|^2)^{-1/2} z)`.
pub fn section_gz<T: Real>(z: Cx<T>) -> Result<Matrix2Element<T>> {
    let raw = section_gz_displayed(z)?;
    let k = raw.constraint().sqrt();
    Ok(Matrix2Element::new_unchecked(raw.a / k, raw.b / k, MatrixGroup::SU11))
}

/// Matrix of `Ad(g)^{-1} : Y -> g^{-1} Y g` in the basis of the group's algebra.
/// Column `j` holds the coordinates of the image of the `j`-th basis vector.
pub fn adjoint_matrix<T: Real>(g: &Matrix2Element<T>) -> [[T; 3]; 3] {
    let algebra = g.group.algebra();
    let gm = g.to_matrix();
    let gi = g.inverse().to_matrix();
    let mut out = [[T::zero(); 3]; 3];
    for j in 0..3 {
        let basis = AlgebraVector::basis(algebra, j).to_matrix().expect("matrix algebra");
        let img = mat_mul(&mat_mul(&gi, &basis), &gm);
        let y = AlgebraVector::from_matrix(algebra, &img).expect("matrix algebra");
        for i in 0..3 {
            out[i][j] = y.x[i];
        }
    }
    out
}

pub fn apply_matrix3<T: Real>(m: &[[T; 3]; 3], x: &AlgebraVector<T>) -> AlgebraVector<T> {
    let mut y = [T::zero(); 3];
    for (i, row) in m.iter().enumerate() {
        y[i] = row[0] * x.x[0] + row[1] * x.x[1] + row[2] * x.x[2];
    }
    AlgebraVector {
        x: y,
        algebra: x.algebra,
    }
}

pub fn bracket<T: Real>(x: &AlgebraVector<T>, y: &AlgebraVector<T>) -> Result<AlgebraVector<T>> {
    if x.algebra != y.algebra {
        return Err(Error::mismatch("bracket of vectors in different algebras"));
    }
    if x.algebra == Algebra::Heis {
        return Ok(AlgebraVector::heis(
            T::zero(),
            T::zero(),
            x.x[0] * y.x[1] - x.x[1] * y.x[0],
        ));
    }
    let (p, q) = (x.to_matrix()?, y.to_matrix()?);
    let comm = mat_sub(&mat_mul(&p, &q), &mat_mul(&q, &p));
    AlgebraVector::from_matrix(x.algebra, &comm)
}

#[cfg(test)]
mod tests {
    use super::*;

    type V = AlgebraVector<f64>;

    fn close(a: Cx<f64>, b: Cx<f64>, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn heisenberg_law() {
        let g = heis_mul(&HeisenbergElement::new(1.0, 0.0, 0.0), &HeisenbergElement::new(0.0, 1.0, 0.0));
        assert_eq!(g, HeisenbergElement::new(1.0, 1.0, 0.5));
        let h = HeisenbergElement::new(0.3, -1.2, 2.0);
        assert_eq!(heis_mul(&HeisenbergElement::identity(), &h), h);
        assert_eq!(heis_mul(&h, &h.inverse()), HeisenbergElement::identity());
        assert!(close(HeisenbergElement::new(1.0, 0.0, 0.0).act(1.0, Cx::zero()), cx(0.0, -1.0), 1e-15));
    }

    #[test]
    fn exponential_examples() {
        let t = 0.7;
        let g = matrix_exp(&V::su11(0.0, 0.0, t)).unwrap();
        assert!(close(g.a, Cx::from_polar(1.0, -t / 2.0), 1e-15) && g.b.norm() < 1e-15);
        let g = matrix_exp(&V::su11(0.0, 0.0, 0.0)).unwrap();
        assert_eq!((g.a, g.b), (cx(1.0, 0.0), cx(0.0, 0.0)));
        let g = matrix_exp(&V::su2(t, 0.0, 0.0)).unwrap();
        assert!(close(g.a, cx((t / 2.0).cos(), 0.0), 1e-15));
        assert!(close(g.b, cx(0.0, (t / 2.0).sin()), 1e-15));
        assert!(matches!(matrix_exp(&V::heis(1.0, 0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn exponential_matches_series_oracle() {
        for x in [
            V::su11(1.3, -0.4, 1.9),
            V::su11(1.0, 0.0, 1.0 + 1e-7),
            V::su2(-1.7, 0.2, 0.9),
            V::su2(1e-3, 2e-3, -1e-3),
        ] {
            let g = matrix_exp(&x).unwrap();
            let oracle = expm_series(&x.to_matrix().unwrap());
            assert!(mat_dist(&g.to_matrix(), &oracle) < 1e-13, "{x:?}");
        }
    }

    #[test]
    fn log_inverts_exp() {
        for x in [
            V::su11(0.4, 1.1, -0.3),
            V::su11(0.2, 0.1, 1.5),
            V::su2(0.5, -1.0, 2.0),
            V::su2(1e-9, 0.0, 3e-9),
        ] {
            let y = matrix_log(&matrix_exp(&x).unwrap()).unwrap();
            for i in 0..3 {
                assert!((x.x[i] - y.x[i]).abs() < 1e-12, "{x:?} {y:?}");
            }
        }
    }

    #[test]
    fn actions() {
        let s2 = 2f64.sqrt();
        let g = Matrix2Element::new(cx(s2, 0.0), cx(1.0, 0.0), MatrixGroup::SU11).unwrap();
        assert!(close(g.act(Cx::zero()).unwrap(), cx(1.0 / s2, 0.0), 1e-15));
        let z = cx(0.1, 0.3);
        let id = Matrix2Element::identity(MatrixGroup::SU2);
        assert_eq!(id.act(z).unwrap(), z);
        // SU2 pole: -conj(b) z + conj(a) = 0
        let g = Matrix2Element::new(cx(0.6, 0.0), cx(0.8, 0.0), MatrixGroup::SU2).unwrap();
        assert!(matches!(g.act(cx(0.75, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn action_is_a_left_action() {
        for group in [MatrixGroup::SU11, MatrixGroup::SU2] {
            let alg = group.algebra();
            let g = matrix_exp(&V::new(alg, 0.3, -0.5, 0.8)).unwrap();
            let h = matrix_exp(&V::new(alg, -0.2, 0.4, 0.1)).unwrap();
            let z = cx(0.2, -0.1);
            let lhs = g.act(h.act(z).unwrap()).unwrap();
            let rhs = g.mul(&h).unwrap().act(z).unwrap();
            assert!(close(lhs, rhs, 1e-14));
            assert!(close(g.inverse().act(g.act(z).unwrap()).unwrap(), z, 1e-14));
        }
    }

    #[test]
    fn sections() {
        assert_eq!(section_gz(Cx::<f64>::zero()).unwrap(), Matrix2Element::identity(MatrixGroup::SU11));
        let z = cx(0.5, 0.0);
        assert!(close(section_gz(z).unwrap().act(Cx::zero()).unwrap(), z, 1e-15));
        let z: Cx<f64> = cx(-0.3, 0.6);
        let raw = section_gz_displayed(z).unwrap();
        assert!((raw.constraint() - (1.0 + z.norm())).abs() < 1e-14);
        let g = section_gz(z).unwrap();
        assert!((g.constraint() - 1.0).abs() < 1e-14);
        assert!(close(g.act(Cx::zero()).unwrap(), z, 1e-15));
        assert!(section_gz(cx(1.0, 0.0)).is_err());
    }

    #[test]
    fn brackets() {
        let v = |alg, i| V::basis(alg, i);
        assert_eq!(bracket(&v(Algebra::Heis, 0), &v(Algebra::Heis, 1)).unwrap(), v(Algebra::Heis, 2));
        let u12: V = bracket(&v(Algebra::Su11, 0), &v(Algebra::Su11, 1)).unwrap();
        assert!((u12.x[2] - 1.0).abs() < 1e-15 && u12.x[0].abs() < 1e-15);
        let w12: V = bracket(&v(Algebra::Su2, 0), &v(Algebra::Su2, 1)).unwrap();
        assert!((w12.x[2] - 1.0).abs() < 1e-15);
        assert!(bracket(&v(Algebra::Su2, 0), &v(Algebra::Su11, 1)).is_err());
    }

    #[test]
    fn adjoint_of_rotation() {
        let id = adjoint_matrix(&Matrix2Element::<f64>::identity(MatrixGroup::SU11));
        for (i, row) in id.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
        let m = adjoint_matrix(&matrix_exp(&V::su11(0.0, 0.0, 0.9)).unwrap());
        assert!((m[2][2] - 1.0).abs() < 1e-15 && m[0][2].abs() < 1e-15 && m[2][0].abs() < 1e-15);
        let det2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((det2 - 1.0).abs() < 1e-14);
    }
}
