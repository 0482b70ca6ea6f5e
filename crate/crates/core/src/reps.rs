//! Representation operators, their differentials, cocycles, Berezin symbols
//! and matrix elements for the pairs (H, Fock), (SU(1,1), Disc), (SU(2), Poly).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{Algebra, AlgebraVector, GroupElement, HeisenbergElement, Matrix2Element, MatrixGroup};
use crate::rkhs::{Expansion, SpaceKind, SpaceModel, TruncatedSeries};
use crate::scalar::{cx, i_unit, ln_1p_cx, powi_cx, re, Cx, Real};

/// Square matrix `M[q][p] = <A f_p, f_q>` in the orthonormal monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    dim: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            data: vec![Cx::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |q, p| if q == p { re(T::one()) } else { Cx::zero() })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Cx<T>) -> Self {
        let mut m = Self::zeros(dim);
        for q in 0..dim {
            for p in 0..dim {
                m.data[q * dim + p] = f(q, p);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry in row `q`, column `p`.
    pub fn get(&self, q: usize, p: usize) -> Cx<T> {
        self.data[q * self.dim + p]
    }

    pub fn set(&mut self, q: usize, p: usize, v: Cx<T>) {
        self.data[q * self.dim + p] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |q, p| self.get(p, q).conj())
    }

    pub fn leading_block(&self, k: usize) -> Self {
        let k = k.min(self.dim);
        Self::from_fn(k, |q, p| self.get(q, p))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::mismatch("matrix dimensions differ"));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for q in 0..n {
            for k in 0..n {
                let a = self.get(q, k);
                if a.is_zero() {
                    continue;
                }
                for p in 0..n {
                    out.data[q * n + p] += a * rhs.get(k, p);
                }
            }
        }
        Ok(out)
    }

    /// `M v`, reading missing entries of `v` as zero and dropping rows past `v.len()`
    /// only when `v` is shorter than the matrix.
    pub fn matvec(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.dim.min(v.len());
        (0..n)
            .map(|q| (0..n).fold(Cx::zero(), |acc, p| acc + self.get(q, p) * v[p]))
            .collect()
    }

    /// `w^* M v` over the common leading block.
    pub fn sesquilinear(&self, w: &[Cx<T>], v: &[Cx<T>]) -> Cx<T> {
        let mv = self.matvec(v);
        mv.iter()
            .zip(w)
            .fold(Cx::zero(), |acc, (a, b)| acc + *a * b.conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let k = self.dim.min(other.dim);
        let mut m = T::zero();
        for q in 0..k {
            for p in 0..k {
                m = m.max((self.get(q, p) - other.get(q, p)).norm());
            }
        }
        m
    }

    /// `max |M_qp - conj(M_pq)|` over the leading `k x k` block.
    pub fn hermiticity_defect(&self, k: usize) -> T {
        let k = k.min(self.dim);
        let mut m = T::zero();
        for q in 0..k {
            for p in 0..k {
                m = m.max((self.get(q, p) - self.get(p, q).conj()).norm());
            }
        }
        m
    }
}

/// Tridiagonal operator: `diag[p] = M_pp`, `sub[p] = M_{p+1,p}`, `sup[p] = M_{p,p+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal<T: Real> {
    pub diag: Vec<Cx<T>>,
    pub sub: Vec<Cx<T>>,
    pub sup: Vec<Cx<T>>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> OperatorMatrix<T> {
        let n = self.dim();
        let mut m = OperatorMatrix::zeros(n);
        for p in 0..n {
            m.set(p, p, self.diag[p]);
            if p + 1 < n {
                m.set(p + 1, p, self.sub[p]);
                m.set(p, p + 1, self.sup[p]);
            }
        }
        m
    }
}

/// Either an explicit matrix or a group element acting through the representation.
#[derive(Clone, Copy, Debug)]
pub enum Operator<'a, T: Real> {
    Matrix(&'a OperatorMatrix<T>),
    Group(&'a GroupElement<T>),
}

fn check_pair<T: Real>(space: &SpaceModel<T>, algebra: Algebra) -> Result<()> {
    let ok = matches!(
        (space.kind(), algebra),
        (SpaceKind::Fock { .. }, Algebra::Heis) | (SpaceKind::Disc { .. }, Algebra::Su11) | (SpaceKind::Poly { .. }, Algebra::Su2)
    );
    if ok {
        Ok(())
    } else {
        Err(Error::mismatch(format!("{algebra:?} does not act on {}", space.name())))
    }
}

fn gamma_of<T: Real>(space: &SpaceModel<T>) -> T {
    match space.kind() {
        SpaceKind::Fock { gamma } => gamma,
        _ => T::zero(),
    }
}

/// `g . z` for the group attached to the space.
pub fn group_action<T: Real>(space: &SpaceModel<T>, g: &GroupElement<T>, z: Cx<T>) -> Result<Cx<T>> {
    check_pair(space, g.algebra())?;
    g.act(gamma_of(space), z)
}

/// Automorphy factor with `(pi(g) f)(z) = alpha(g^{-1}, z) f(g^{-1} . z)`.
///
/// Fock: `exp(-i gamma a3 - w z / 2 - gamma |w|^2 / 4)` with `w = a2 + i a1`.
/// Disc: `(conj(b) z + conj(a))^{-n}`. Poly: `(-conj(b) z + conj(a))^m`.
pub fn cocycle_alpha<T: Real>(space: &SpaceModel<T>, g: &GroupElement<T>, z: Cx<T>) -> Result<Cx<T>> {
    check_pair(space, g.algebra())?;
    match (space.kind(), g) {
        (SpaceKind::Fock { gamma }, GroupElement::Heis(h)) => {
            let w = cx(h.a2, h.a1);
            Ok((cx(T::zero(), -gamma * h.a3) - w * z * T::half() - re(gamma * w.norm_sqr() * T::lit(0.25))).exp())
        }
        (SpaceKind::Disc { n }, GroupElement::Matrix(m)) => {
            if z.norm() >= T::one() {
                return Err(Error::domain(format!("{z} outside the unit disc")));
            }
            let den = m.b.conj() * z + m.a.conj();
            Ok(powi_cx(den, -(n as i64)))
        }
        (SpaceKind::Poly { m: deg }, GroupElement::Matrix(m)) => {
            let den = -m.b.conj() * z + m.a.conj();
            if den.is_zero() {
                return Ok(Cx::zero());
            }
            Ok(powi_cx(den, deg as i64))
        }
        _ => unreachable!("pair checked above"),
    }
}

/// `b^k` as a truncated series by binary exponentiation.
fn series_pow<T: Real>(base: &TruncatedSeries<T>, mut k: u64, cap: usize) -> TruncatedSeries<T> {
    let mut acc = TruncatedSeries::constant(re(T::one()), cap);
    let mut sq = base.resized(cap).0;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul_trunc(&sq, cap);
        }
        k >>= 1;
        if k > 0 {
            sq = sq.mul_trunc(&sq, cap);
        }
    }
    acc
}

/// Coefficients of `pi(g) f` through degree `cap`, exact up to rounding.
fn transform<T: Real>(space: &SpaceModel<T>, g: &GroupElement<T>, f: &TruncatedSeries<T>, cap: usize) -> TruncatedSeries<T> {
    match (space.kind(), g) {
        (SpaceKind::Fock { gamma }, GroupElement::Heis(h)) => {
            // pi(g) f (z) = exp(i gamma a3 - gamma |w|^2 / 4) e^{w z / 2} f(z - gamma conj(w))
            let w = cx(h.a2, h.a1);
            let inner = TruncatedSeries::new(vec![-w.conj() * gamma, re(T::one())]);
            let shifted = f.compose(&inner, cap);
            let c0 = (cx(-gamma * w.norm_sqr() * T::lit(0.25), gamma * h.a3)).exp();
            let mut factor = Vec::with_capacity(cap + 1);
            let mut term = c0;
            for j in 0..=cap {
                factor.push(term);
                term = term * w * T::half() / T::from_usize_lossy(j + 1);
            }
            shifted.mul_trunc(&TruncatedSeries::new(factor), cap)
        }
        (SpaceKind::Disc { n }, GroupElement::Matrix(m)) => {
            // (a - conj(b) z)^{-n} f((conj(a) z - b) / (a - conj(b) z))
            let (a, b) = (m.a, m.b);
            let q = b.conj() / a;
            let mut geo = Vec::with_capacity(cap + 1);
            let mut term = a.inv();
            for _ in 0..=cap {
                geo.push(term);
                term *= q;
            }
            let mobius = TruncatedSeries::new(vec![-b, a.conj()]).mul_trunc(&TruncatedSeries::new(geo), cap);
            let composed = f.compose(&mobius, cap);
            let nn = T::from_u32(n).unwrap();
            let mut auto = Vec::with_capacity(cap + 1);
            let mut term = powi_cx(a, -(n as i64));
            for j in 0..=cap {
                auto.push(term);
                let jj = T::from_usize_lossy(j);
                term = term * q * ((nn + jj) / (jj + T::one()));
            }
            composed.mul_trunc(&TruncatedSeries::new(auto), cap)
        }
        (SpaceKind::Poly { m: deg }, GroupElement::Matrix(m)) => {
            // sum_k f_k (conj(a) z - b)^k (conj(b) z + a)^{m - k}, homogeneous Horner
            let (a, b) = (m.a, m.b);
            let num = TruncatedSeries::new(vec![-b, a.conj()]);
            let den = TruncatedSeries::new(vec![a, b.conj()]);
            let d = f.degree().unwrap_or(0);
            let mut den_pows = vec![TruncatedSeries::constant(re(T::one()), cap)];
            for j in 1..=d {
                let next = den_pows[j - 1].mul_trunc(&den, cap);
                den_pows.push(next);
            }
            let mut acc = TruncatedSeries::constant(f.coeff(d), cap);
            for k in (0..d).rev() {
                acc = acc.mul_trunc(&num, cap);
                acc = &acc + &den_pows[d - k].scale(f.coeff(k));
            }
            acc.mul_trunc(&series_pow(&den, deg as u64 - d as u64, cap), cap)
        }
        _ => unreachable!("pair checked by the caller"),
    }
}

/// `pi(g) f` truncated at the working degree with the norm of the discarded part.
///
/// Coefficients are computed through twice the working degree; mass beyond
/// that is recovered from unitarity as `||f||^2 - ||computed||^2` when it
/// exceeds rounding level.
pub fn apply_pi<T: Real>(space: &SpaceModel<T>, g: &GroupElement<T>, f: &TruncatedSeries<T>) -> Result<Expansion<T>> {
    check_pair(space, g.algebra())?;
    space.check_member(f)?;
    let cap = space.working_degree();
    if f.degree().unwrap_or(0) > cap {
        return Err(Error::domain(format!(
            "series degree {} exceeds the truncation {cap}",
            f.degree().unwrap_or(0)
        )));
    }
    let (ext, exhaustive) = match space.kind() {
        SpaceKind::Poly { m } => {
            let m = m as usize;
            ((2 * cap).min(m), 2 * cap >= m)
        }
        _ => (2 * cap, false),
    };
    let full = transform(space, g, f, ext);
    let (series, clipped) = full.resized(cap);
    let w = space.weights(ext + 1);
    let clipped_norm = w.tail_norm(&clipped);
    let mut tail2 = clipped_norm * clipped_norm;
    if !exhaustive {
        let before = space.norm_sqr(f)?;
        let after = space.norm_sqr(&full)?;
        let beyond = before - after;
        if beyond > T::lit(1e3) * T::epsilon() * before {
            tail2 += beyond;
        }
    }
    Ok(Expansion {
        series,
        tail: tail2.sqrt(),
    })
}

/// `dpi(X) f = (p0 + p1 z) f + (q0 + q1 z + q2 z^2) f'`, as `([p0, p1], [q0, q1, q2])`.
fn dpi_coefficients<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>) -> ([Cx<T>; 2], [Cx<T>; 3]) {
    let [x1, x2, x3] = x.x;
    let h = T::half();
    let i = i_unit::<T>();
    match space.kind() {
        SpaceKind::Fock { gamma } => (
            [i * (gamma * x3), cx(x2, x1) * h],
            [cx(-x2, x1) * gamma, Cx::zero(), Cx::zero()],
        ),
        SpaceKind::Disc { n } => {
            let nh = T::from_u32(n).unwrap() * h;
            (
                [i * (nh * x3), cx(x2, x1) * nh],
                [cx(-x2, x1) * h, i * x3, cx(x2, x1) * h],
            )
        }
        SpaceKind::Poly { m } => {
            let mh = T::from_u32(m).unwrap() * h;
            (
                [i * (mh * x3), -cx(x2, x1) * mh],
                [cx(x2, -x1) * h, -i * x3, cx(x2, x1) * h],
            )
        }
    }
}

/// `dpi(X) f`; the degree grows by at most one and the clipped part is
/// reported as a tail norm. On Poly the degree never exceeds `m`.
pub fn apply_dpi<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, f: &TruncatedSeries<T>) -> Result<Expansion<T>> {
    check_pair(space, x.algebra)?;
    space.check_member(f)?;
    let ([p0, p1], [q0, q1, q2]) = dpi_coefficients(space, x);
    let d = f.degree().unwrap_or(0);
    let top = match space.kind() {
        SpaceKind::Poly { m } => (d + 1).min(m as usize),
        _ => d + 1,
    };
    let out: Vec<Cx<T>> = (0..=top)
        .map(|k| {
            let kk = T::from_usize_lossy(k);
            let mut v = (p0 + q1 * kk) * f.coeff(k) + q0 * (kk + T::one()) * f.coeff(k + 1);
            if k >= 1 {
                v += (p1 + q2 * (kk - T::one())) * f.coeff(k - 1);
            }
            v
        })
        .collect();
    let cap = space.working_degree().max(f.cap());
    let (series, clipped) = TruncatedSeries::new(out).resized(cap);
    let tail = space.weights(top + 2).tail_norm(&clipped);
    Ok(Expansion { series, tail })
}

/// `-i dpi(X)` on the first `size` orthonormal basis vectors.
pub fn dpi_tridiagonal<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, size: usize) -> Result<Tridiagonal<T>> {
    check_pair(space, x.algebra)?;
    if let SpaceKind::Poly { m } = space.kind() {
        if size > m as usize + 1 {
            return Err(Error::domain(format!("size {size} exceeds m + 1 = {}", m + 1)));
        }
    }
    let ([p0, p1], [q0, q1, q2]) = dpi_coefficients(space, x);
    let mi = -i_unit::<T>();
    let w = space.weights(size + 1);
    let mut diag = Vec::with_capacity(size);
    let mut sub = Vec::with_capacity(size.saturating_sub(1));
    let mut sup = Vec::with_capacity(size.saturating_sub(1));
    for p in 0..size {
        let pp = T::from_usize_lossy(p);
        diag.push(mi * (p0 + q1 * pp));
        if p + 1 < size {
            sub.push(mi * (p1 + q2 * pp) * w.sqrt_ratio(p + 1, p));
            sup.push(mi * q0 * (pp + T::one()) * w.sqrt_ratio(p, p + 1));
        }
    }
    Ok(Tridiagonal { diag, sub, sup })
}

/// Matrix of `-i dpi(X)` of dimension `size`.
pub fn dpi_matrix<T: Real>(space: &SpaceModel<T>, x: &AlgebraVector<T>, size: usize) -> Result<OperatorMatrix<T>> {
    Ok(dpi_tridiagonal(space, x, size)?.to_matrix())
}

/// `<pi(g) f_p, f_q>` for `p, q <= pmax`.
pub fn matrix_elements_pi<T: Real>(space: &SpaceModel<T>, g: &GroupElement<T>, pmax: usize) -> Result<OperatorMatrix<T>> {
    let top = space.working_degree();
    if pmax > top {
        return Err(Error::domain(format!("pmax {pmax} exceeds the working degree {top}")));
    }
    let dim = pmax + 1;
    let w = space.weights(dim);
    let mut out = OperatorMatrix::zeros(dim);
    for p in 0..dim {
        let image = apply_pi(space, g, &space.basis_vector(p, p))?.series;
        for q in 0..dim {
            out.set(q, p, w.scale(image.coeff(q), q, T::half()));
        }
    }
    Ok(out)
}

/// Largest relative tail `tail / |e_z|` a numeric symbol accepts.
pub const SYMBOL_TAIL_TOL: f64 = 1e-9;

fn check_tail<T: Real>(space: &SpaceModel<T>, tail: T, norm: T, what: &str) -> Result<()> {
    let rel = tail / norm;
    if rel > T::lit(SYMBOL_TAIL_TOL) || !rel.is_finite() {
        return Err(Error::Precision {
            message: format!(
                "{what} keeps relative tail {rel:e} at truncation {} of {}",
                space.truncation(),
                space.name()
            ),
            tail: tail.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `<A e_w, e_z>` with truncated coherent states, in orthonormal coordinates.
fn kernel_of<T: Real>(space: &SpaceModel<T>, a: Operator<'_, T>, z: Cx<T>, w: Cx<T>) -> Result<Cx<T>> {
    let ez = space.coherent_state(z)?;
    let ew = space.coherent_state(w)?;
    check_tail(space, ez.tail, space.kernel_weight(z).sqrt(), "coherent state")?;
    check_tail(space, ew.tail, space.kernel_weight(w).sqrt(), "coherent state")?;
    match a {
        Operator::Group(g) => {
            let image = apply_pi(space, g, &ew.series)?;
            space.inner_product(&image.series, &ez.series)
        }
        Operator::Matrix(m) => {
            let vz = space.to_orthonormal(&ez.series)?;
            let vw = space.to_orthonormal(&ew.series)?;
            Ok(m.sesquilinear(&vz, &vw))
        }
    }
}

/// `S(A)(z) = <A e_z, e_z> / <e_z, e_z>` from truncated coherent states.
pub fn berezin_symbol_numeric<T: Real>(space: &SpaceModel<T>, a: Operator<'_, T>, z: Cx<T>) -> Result<Cx<T>> {
    if let Operator::Group(g) = a {
        check_pair(space, g.algebra())?;
    }
    Ok(kernel_of(space, a, z, z)? / space.kernel_weight(z))
}

/// `s(A)(z, w) = <A e_w, e_z> / <e_w, e_z>`.
pub fn double_symbol<T: Real>(space: &SpaceModel<T>, a: Operator<'_, T>, z: Cx<T>, w: Cx<T>) -> Result<Cx<T>> {
    if let Operator::Group(g) = a {
        check_pair(space, g.algebra())?;
    }
    let k = space.kernel(z, w);
    let scale = (space.kernel_weight(z) * space.kernel_weight(w)).sqrt();
    if k.norm() <= T::lit(1e-13) * scale {
        return Err(Error::DegeneratePair {
            z: z.to_string(),
            w: w.to_string(),
        });
    }
    Ok(kernel_of(space, a, z, w)? / k)
}

/// Closed-form symbol of `pi(g)`.
///
/// Fock: `exp(i gamma a3 - gamma (a1^2 + a2^2) / 4 + i (a1 x + a2 y))`.
/// Disc: `(a - conj(a)|z|^2 - conj(b) z + b conj(z))^{-n} (1 - |z|^2)^n`.
/// Poly: `(a + conj(a)|z|^2 + conj(b) z - b conj(z))^m (1 + |z|^2)^{-m}`.
/// Powers are taken as `exp(k ln(base / weight))` so that large `n`, `m`
/// along contraction schedules stay accurate.
pub fn closed_form_symbol<T: Real>(space: &SpaceModel<T>, g: &GroupElement<T>, z: Cx<T>) -> Result<Cx<T>> {
    check_pair(space, g.algebra())?;
    let r2 = z.norm_sqr();
    match (space.kind(), g) {
        (SpaceKind::Fock { gamma }, GroupElement::Heis(h)) => Ok(fock_symbol(gamma, h, z)),
        (SpaceKind::Disc { n }, GroupElement::Matrix(m)) => {
            if r2 >= T::one() {
                return Err(Error::domain(format!("{z} outside the unit disc")));
            }
            let base = m.a - m.a.conj() * r2 - m.b.conj() * z + m.b * z.conj();
            if base.is_zero() {
                return Err(Error::Singularity("symbol base vanishes".into()));
            }
            // base / (1 - |z|^2) = 1 + w
            let w = (m.a - re(T::one()) + (re(T::one()) - m.a.conj()) * r2 - m.b.conj() * z + m.b * z.conj()) / (T::one() - r2);
            let nn = T::from_u32(n).unwrap();
            Ok((-ln_1p_cx(w) * nn).exp())
        }
        (SpaceKind::Poly { m: deg }, GroupElement::Matrix(m)) => {
            let base = m.a + m.a.conj() * r2 + m.b.conj() * z - m.b * z.conj();
            if base.is_zero() {
                return Ok(Cx::zero());
            }
            let w = (m.a - re(T::one()) + (m.a.conj() - re(T::one())) * r2 + m.b.conj() * z - m.b * z.conj()) / (T::one() + r2);
            let mm = T::from_u32(deg).unwrap();
            Ok((ln_1p_cx(w) * mm).exp())
        }
        _ => unreachable!("pair checked above"),
    }
}

pub(crate) fn fock_symbol<T: Real>(gamma: T, h: &HeisenbergElement<T>, z: Cx<T>) -> Cx<T> {
    cx(
        -gamma * (h.a1 * h.a1 + h.a2 * h.a2) * T::lit(0.25),
        gamma * h.a3 + h.a1 * z.re + h.a2 * z.im,
    )
    .exp()
}

/// The group element attached to `exp(X)` in the appropriate group.
pub fn group_exp<T: Real>(x: &AlgebraVector<T>) -> Result<GroupElement<T>> {
    match x.algebra {
        Algebra::Heis => Ok(GroupElement::Heis(crate::groups::heis_exp(x)?)),
        _ => Ok(GroupElement::Matrix(crate::groups::matrix_exp(x)?)),
    }
}

/// Identity of the group attached to the space.
pub fn identity_for<T: Real>(space: &SpaceModel<T>) -> GroupElement<T> {
    match space.kind() {
        SpaceKind::Fock { .. } => GroupElement::Heis(HeisenbergElement::identity()),
        SpaceKind::Disc { .. } => GroupElement::Matrix(Matrix2Element::identity(MatrixGroup::SU11)),
        SpaceKind::Poly { .. } => GroupElement::Matrix(Matrix2Element::identity(MatrixGroup::SU2)),
    }
}

/// Algebra acting on the space.
pub fn algebra_for<T: Real>(space: &SpaceModel<T>) -> Algebra {
    match space.kind() {
        SpaceKind::Fock { .. } => Algebra::Heis,
        SpaceKind::Disc { .. } => Algebra::Su11,
        SpaceKind::Poly { .. } => Algebra::Su2,
    }
}
