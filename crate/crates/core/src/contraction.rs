//! Contractions of SU(1,1) and SU(2) to the Heisenberg group and the
//! convergence experiments built on them.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::groups::{
    adjoint_matrix, apply_matrix3, bracket, entire_c, entire_s, heis_mul, matrix_exp, matrix_log, section_gz,
    Algebra, AlgebraVector, GroupElement, HeisenbergElement, Matrix2Element, MatrixGroup,
};
use crate::reps::{closed_form_symbol, fock_symbol, matrix_elements_pi};
use crate::rkhs::SpaceModel;
use crate::scalar::{cx, re, Cx, Real};
use crate::spectral::{
    binomial_measure, fourier_invert_density, gaussian_density, pair_measure_test, spectral_measure_finite,
    DensitySource, InversionSpec, SpectralMeasure, StarExponential, TestFunction,
};

/// `r(n) = sqrt(2 gamma / n)`, so that `n r(n)^2 = 2 gamma`.
pub fn r_schedule<T: Real>(n: u32, gamma: T) -> Result<T> {
    if n < 1 {
        return Err(Error::domain("the schedule needs n >= 1"));
    }
    if !(gamma > T::zero()) {
        return Err(Error::domain("gamma must be positive"));
    }
    Ok((T::two() * gamma / T::from_u32(n).unwrap()).sqrt())
}

/// Geometric index list `2^lo, ..., 2^hi`.
pub fn doubling_indices(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).map(|k| 1u32 << k).collect()
}

/// The default index list `2^4, ..., 2^14`.
pub fn default_indices() -> Vec<u32> {
    doubling_indices(4, 14)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContractionSchedule<T> {
    pub gamma: T,
    pub index: u32,
    pub r: T,
}

impl<T: Real> ContractionSchedule<T> {
    pub fn new(gamma: T, index: u32) -> Result<Self> {
        Ok(ContractionSchedule {
            gamma,
            index,
            r: r_schedule(index, gamma)?,
        })
    }

    /// `z / sqrt(2 gamma n)`.
    pub fn scaled_point(&self, z: Cx<T>) -> Cx<T> {
        z / (T::two() * self.gamma * T::from_u32(self.index).unwrap()).sqrt()
    }

    /// The representation space attached to the index in the target group.
    pub fn space(&self, target: MatrixGroup) -> Result<SpaceModel<T>> {
        match target {
            MatrixGroup::SU11 => SpaceModel::disc(self.index),
            MatrixGroup::SU2 => SpaceModel::poly(self.index),
        }
    }
}

/// `C_r(a1 v1 + a2 v2 + a3 v3) = r a1 u1 + r a2 u2 + r^2 a3 u3` in the target algebra.
pub fn contraction_map<T: Real>(r: T, x: &AlgebraVector<T>, target: MatrixGroup) -> Result<AlgebraVector<T>> {
    if !(r > T::zero()) {
        return Err(Error::domain("the contraction parameter must be positive"));
    }
    if x.algebra != Algebra::Heis {
        return Err(Error::mismatch("the contraction map acts on the Heisenberg algebra"));
    }
    let [a1, a2, a3] = x.x;
    Ok(AlgebraVector::new(target.algebra(), r * a1, r * a2, r * r * a3))
}

/// `C_r^{-1}` from the target algebra back to the Heisenberg algebra.
pub fn contraction_inverse<T: Real>(r: T, y: &AlgebraVector<T>) -> Result<AlgebraVector<T>> {
    if !(r > T::zero()) {
        return Err(Error::domain("the contraction parameter must be positive"));
    }
    if y.algebra == Algebra::Heis {
        return Err(Error::mismatch("the inverse contraction acts on su(1,1) or su(2)"));
    }
    let [x1, x2, x3] = y.x;
    Ok(AlgebraVector::heis(x1 / r, x2 / r, x3 / (r * r)))
}

/// `c_r(h) = exp(C_r(log h))`; Heisenberg elements are stored in exponential coordinates.
pub fn contract_element<T: Real>(r: T, h: &HeisenbergElement<T>, target: MatrixGroup) -> Result<Matrix2Element<T>> {
    let [a1, a2, a3] = h.coords();
    matrix_exp(&contraction_map(r, &AlgebraVector::heis(a1, a2, a3), target)?)
}

/// `c_r^{-1}` through the matrix logarithm.
pub fn uncontract_element<T: Real>(r: T, g: &Matrix2Element<T>) -> Result<HeisenbergElement<T>> {
    let x = contraction_inverse(r, &matrix_log(g)?)?;
    Ok(HeisenbergElement::new(x.x[0], x.x[1], x.x[2]))
}

/// `max_i |(c_r^{-1}(c_r(x) c_r(y)^{-1}) - x y^{-1})_i|`.
pub fn group_contraction_defect<T: Real>(
    r: T,
    x: &HeisenbergElement<T>,
    y: &HeisenbergElement<T>,
    target: MatrixGroup,
) -> Result<T> {
    let gx = contract_element(r, x, target)?;
    let gy = contract_element(r, y, target)?;
    let back = uncontract_element(r, &gx.mul(&gy.inverse())?)?;
    let exact = heis_mul(x, &y.inverse());
    Ok(max_coord_diff(back.coords(), exact.coords()))
}

/// `max_i |(C_r^{-1}[C_r X, C_r Y] - [X, Y])_i|`.
pub fn bracket_contraction_defect<T: Real>(
    r: T,
    x: &AlgebraVector<T>,
    y: &AlgebraVector<T>,
    target: MatrixGroup,
) -> Result<T> {
    let b = bracket(&contraction_map(r, x, target)?, &contraction_map(r, y, target)?)?;
    let back = contraction_inverse(r, &b)?;
    Ok(max_coord_diff(back.x, bracket(x, y)?.x))
}

fn max_coord_diff<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    (0..3).fold(T::zero(), |m, i| m.max((a[i] - b[i]).abs()))
}

/// `g_n = c_{r(n)}(h)` with the scalars of its closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContractedElement<T> {
    pub source: HeisenbergElement<T>,
    pub target: Matrix2Element<T>,
    pub schedule: ContractionSchedule<T>,
    /// `R(n)`, real or purely imaginary.
    pub radius: Cx<T>,
    pub alpha: Cx<T>,
    pub beta: Cx<T>,
}

/// Builds `g_n`. The target is `matrix_exp(C_r(X_h))`; `alpha`, `beta` and
/// `R` come from the closed form of the exponential:
/// on SU(1,1), `R = r (a1^2 + a2^2 - r^2 a3^2)^{1/2} / 2`,
/// `alpha = cosh R - i r^2 a3 sinh R / (2R)`, `beta = r (a2 - i a1) sinh R / (2R)`;
/// on SU(2), `R = i r (a1^2 + a2^2 + r^2 a3^2)^{1/2} / 2`,
/// `alpha = cosh R + i r^2 a3 sinh R / (2R)`, `beta = r (i a1 - a2) sinh R / (2R)`.
pub fn contracted_group_element<T: Real>(
    h: &HeisenbergElement<T>,
    schedule: &ContractionSchedule<T>,
    target: MatrixGroup,
) -> Result<ContractedElement<T>> {
    let r = schedule.r;
    let [a1, a2, a3] = h.coords();
    let q = T::lit(0.25) * r * r;
    let (r2, sign, lin) = match target {
        MatrixGroup::SU11 => (q * (a1 * a1 + a2 * a2 - r * r * a3 * a3), -T::one(), cx(a2, -a1)),
        MatrixGroup::SU2 => (-q * (a1 * a1 + a2 * a2 + r * r * a3 * a3), T::one(), cx(-a2, a1)),
    };
    let radius = if r2 >= T::zero() { re(r2.sqrt()) } else { cx(T::zero(), (-r2).sqrt()) };
    let (c, s) = (entire_c(r2), entire_s(r2));
    let alpha = cx(c, sign * r * r * a3 * s * T::half());
    let beta = lin * (r * s * T::half());
    Ok(ContractedElement {
        source: *h,
        target: contract_element(r, h, target)?,
        schedule: *schedule,
        radius,
        alpha,
        beta,
    })
}

/// Limit of `n (alpha_n - 1)`: `gamma (a1^2 + a2^2) / 4 - i gamma a3` on
/// SU(1,1) and its negative on SU(2).
pub fn alpha_limit<T: Real>(gamma: T, h: &HeisenbergElement<T>, target: MatrixGroup) -> Cx<T> {
    let v = cx(gamma * (h.a1 * h.a1 + h.a2 * h.a2) * T::lit(0.25), -gamma * h.a3);
    match target {
        MatrixGroup::SU11 => v,
        MatrixGroup::SU2 => -v,
    }
}

/// Limit of `n beta_n / sqrt(2 gamma n)`: `(a2 - i a1) / 2` on SU(1,1) and
/// its negative on SU(2), since `n r(n) = sqrt(2 gamma n)`.
pub fn beta_limit<T: Real>(h: &HeisenbergElement<T>, target: MatrixGroup) -> Cx<T> {
    let v = cx(h.a2, -h.a1) * T::half();
    match target {
        MatrixGroup::SU11 => v,
        MatrixGroup::SU2 => -v,
    }
}

/// `theta(a1, a2, a3) = (-a1, -a2, a3)`, the automorphism relating the SU(2)
/// limit of the symbols and matrix elements to the Fock representation.
pub fn parity_twist<T: Real>(h: &HeisenbergElement<T>) -> HeisenbergElement<T> {
    HeisenbergElement::new(-h.a1, -h.a2, h.a3)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub index: u32,
    /// `None` when the row was skipped.
    pub value: Option<Cx<T>>,
    pub limit: Cx<T>,
    pub abs_error: Option<T>,
    pub skipped: Option<String>,
}

/// Rows of (index, measured value, limit, absolute error), sorted by index.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable<T> {
    pub kind: String,
    pub metadata: serde_json::Value,
    pub rows: Vec<ConvergenceRow<T>>,
}

impl<T: Real> ConvergenceTable<T> {
    pub fn new(kind: impl Into<String>, metadata: serde_json::Value) -> Self {
        ConvergenceTable {
            kind: kind.into(),
            metadata,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, index: u32, value: Cx<T>, limit: Cx<T>) {
        self.push_error(index, value, limit, (value - limit).norm());
    }

    /// A row whose error is not `|value - limit|`, such as a sup over a grid.
    pub fn push_error(&mut self, index: u32, value: Cx<T>, limit: Cx<T>, abs_error: T) {
        self.insert(ConvergenceRow {
            index,
            value: Some(value),
            limit,
            abs_error: Some(abs_error),
            skipped: None,
        });
    }

    pub fn push_skipped(&mut self, index: u32, limit: Cx<T>, reason: impl Into<String>) {
        self.insert(ConvergenceRow {
            index,
            value: None,
            limit,
            abs_error: None,
            skipped: Some(reason.into()),
        });
    }

    fn insert(&mut self, row: ConvergenceRow<T>) {
        let at = self.rows.partition_point(|r| r.index <= row.index);
        self.rows.insert(at, row);
    }

    /// `(index, error)` over the measured rows.
    pub fn errors(&self) -> Vec<(u32, T)> {
        self.rows
            .iter()
            .filter_map(|r| r.abs_error.map(|e| (r.index, e)))
            .collect()
    }

    pub fn error_at(&self, index: u32) -> Option<T> {
        self.rows.iter().find(|r| r.index == index).and_then(|r| r.abs_error)
    }

    /// `e(2n) / e(n)` for consecutive measured rows whose indices double.
    pub fn doubling_ratios(&self) -> Vec<(u32, T)> {
        self.errors()
            .windows(2)
            .filter(|w| w[1].0 == 2 * w[0].0)
            .map(|w| (w[1].0, w[1].1 / w[0].1))
            .collect()
    }

    /// Whether the measured errors never increase from the first measured row on.
    pub fn is_monotone(&self) -> bool {
        self.errors().windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// `index,value_re,value_im,limit_re,limit_im,abs_error`; skipped rows
    /// carry `skipped` in the value and error columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value_re,value_im,limit_re,limit_im,abs_error\n");
        for r in &self.rows {
            match (r.value, r.abs_error) {
                (Some(v), Some(e)) => {
                    let _ = writeln!(
                        out,
                        "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                        r.index, v.re, v.im, r.limit.re, r.limit.im, e
                    );
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "{},skipped,skipped,{:.16e},{:.16e},skipped",
                        r.index, r.limit.re, r.limit.im
                    );
                }
            }
        }
        out
    }

    pub fn metadata_json(&self) -> serde_json::Value {
        let skipped: Vec<_> = self
            .rows
            .iter()
            .filter_map(|r| r.skipped.as_ref().map(|s| json!({ "index": r.index, "reason": s })))
            .collect();
        json!({ "kind": self.kind, "metadata": self.metadata, "skipped": skipped })
    }
}

fn f64s<T: Real>(v: [T; 3]) -> [f64; 3] {
    v.map(|x| x.to_f64_lossy())
}

fn cx_f64<T: Real>(z: Cx<T>) -> [f64; 2] {
    [z.re.to_f64_lossy(), z.im.to_f64_lossy()]
}

fn target_name(target: MatrixGroup) -> &'static str {
    match target {
        MatrixGroup::SU11 => "su11",
        MatrixGroup::SU2 => "su2",
    }
}

/// `|S_n(pi_n(g_n))(z / sqrt(2 gamma n)) - s_gamma(pi_gamma(h))(z)|` along the index list.
/// Points outside the admissible disc are recorded as skipped rows.
pub fn symbol_convergence<T: Real>(
    h: &HeisenbergElement<T>,
    z: Cx<T>,
    gamma: T,
    indices: &[u32],
    target: MatrixGroup,
) -> Result<ConvergenceTable<T>> {
    let limit = fock_symbol(gamma, h, z);
    let mut table = ConvergenceTable::new(
        "symbol",
        json!({ "h": f64s(h.coords()), "z": cx_f64(z), "gamma": gamma.to_f64_lossy(), "target": target_name(target) }),
    );
    for &n in indices {
        let sched = ContractionSchedule::new(gamma, n)?;
        let space = match sched.space(target) {
            Ok(space) => space,
            Err(Error::Domain(reason)) => {
                table.push_skipped(n, limit, reason);
                continue;
            }
            Err(e) => return Err(e),
        };
        let w = sched.scaled_point(z);
        if !space.is_admissible(w) {
            table.push_skipped(n, limit, format!("|z / sqrt(2 gamma n)| = {:e} not admissible", w.norm()));
            continue;
        }
        let g = contracted_group_element(h, &sched, target)?;
        let value = closed_form_symbol(&space, &GroupElement::Matrix(g.target), w)?;
        table.push(n, value, limit);
    }
    Ok(table)
}

/// `<pi_gamma(h) f_p, f_q>` from the truncated Fock representation.
pub fn heisenberg_matrix_element<T: Real>(gamma: T, h: &HeisenbergElement<T>, p: usize, q: usize, truncation: usize) -> Result<Cx<T>> {
    let fock = SpaceModel::fock(gamma)?.with_truncation(truncation);
    let m = matrix_elements_pi(&fock, &GroupElement::Heis(*h), p.max(q))?;
    Ok(m.get(q, p))
}

/// `|<pi_n(g_n) f_p, f_q> - <pi_gamma(h) f_p, f_q>|` along the index list,
/// the Heisenberg side from the Fock Taylor expansion truncated at `truncation`.
pub fn matrix_element_convergence<T: Real>(
    h: &HeisenbergElement<T>,
    gamma: T,
    p: usize,
    q: usize,
    indices: &[u32],
    target: MatrixGroup,
    truncation: usize,
) -> Result<ConvergenceTable<T>> {
    let limit = heisenberg_matrix_element(gamma, h, p, q, truncation)?;
    let mut table = ConvergenceTable::new(
        "matrix-element",
        json!({
            "h": f64s(h.coords()), "gamma": gamma.to_f64_lossy(), "p": p, "q": q,
            "target": target_name(target), "truncation": truncation,
        }),
    );
    for &n in indices {
        if target == MatrixGroup::SU2 && (p.max(q) as u64) > n as u64 {
            table.push_skipped(n, limit, format!("max(p, q) exceeds m = {n}"));
            continue;
        }
        let sched = ContractionSchedule::new(gamma, n)?;
        let space = match sched.space(target) {
            Ok(space) => space,
            Err(Error::Domain(reason)) => {
                table.push_skipped(n, limit, reason);
                continue;
            }
            Err(e) => return Err(e),
        };
        let g = contracted_group_element(h, &sched, target)?;
        let m = matrix_elements_pi(&space, &GroupElement::Matrix(g.target), p.max(q))?;
        table.push(n, m.get(q, p), limit);
    }
    Ok(table)
}

/// The reduction of the SU(1,1) star-exponential at `z / sqrt(2 gamma n)` to
/// the origin: `Ad(g_w)^{-1} C_r(X) = r (c1 u1 + c2 u2 + c3 u3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReduction<T: Real> {
    pub schedule: ContractionSchedule<T>,
    pub point: Cx<T>,
    pub c: [T; 3],
    /// `c1^2 + c2^2 - c3^2`.
    pub d_sqr: T,
    /// `|d_sqr - (a1^2 + a2^2 - r^2 a3^2)|`.
    pub invariant_defect: T,
    pub star: StarExponential<T>,
}

impl<T: Real> DensityReduction<T> {
    pub fn d(&self) -> T {
        self.d_sqr.max(T::zero()).sqrt()
    }
}

pub fn density_reduction<T: Real>(x: &AlgebraVector<T>, z: Cx<T>, gamma: T, n: u32) -> Result<DensityReduction<T>> {
    let sched = ContractionSchedule::new(gamma, n)?;
    let space = sched.space(MatrixGroup::SU11)?;
    let w = sched.scaled_point(z);
    if !space.is_admissible(w) {
        return Err(Error::Precision {
            message: format!("|z / sqrt(2 gamma n)| = {} not admissible at n = {n}", w.norm()),
            tail: f64::NAN,
        });
    }
    let y = contraction_map(sched.r, x, MatrixGroup::SU11)?;
    let b = adjoint_matrix(&section_gz(w)?);
    let c = apply_matrix3(&b, &y).scale(T::one() / sched.r).x;
    let d_sqr = c[0] * c[0] + c[1] * c[1] - c[2] * c[2];
    let [a1, a2, a3] = x.x;
    let expected = a1 * a1 + a2 * a2 - sched.r * sched.r * a3 * a3;
    Ok(DensityReduction {
        schedule: sched,
        point: w,
        c,
        d_sqr,
        invariant_defect: (d_sqr - expected).abs(),
        star: StarExponential::reduced_disc(n, sched.r, c),
    })
}

/// Output of [`density_convergence`]: the table and, per measured index,
/// the reduction and the inverted density.
#[derive(Clone, Debug)]
pub struct DensityConvergence<T: Real> {
    pub table: ConvergenceTable<T>,
    pub reductions: Vec<DensityReduction<T>>,
    pub measures: Vec<(u32, SpectralMeasure<T>)>,
}

/// Number of points on the fixed comparison grid, `mean +- 6 sigma` of the limit.
pub const DENSITY_GRID_POINTS: usize = 241;

/// Inverts the reduced SU(1,1) star-exponential of `C_{r(n)} X` at
/// `z / sqrt(2 gamma n)` and records the sup error against the Fock density
/// on a fixed grid. The value and limit columns hold the densities where the
/// error is largest.
pub fn density_convergence<T: Real>(
    x: &AlgebraVector<T>,
    z: Cx<T>,
    gamma: T,
    indices: &[u32],
    spec: &InversionSpec<T>,
) -> Result<DensityConvergence<T>> {
    let limit = gaussian_density(gamma, x, z)?;
    let limit = limit.as_density().expect("closed-form density");
    let DensitySource::Gaussian { mean, variance } = *limit.source() else {
        unreachable!("closed-form density")
    };
    let sigma = variance.sqrt();
    let grid: Vec<T> = (0..DENSITY_GRID_POINTS)
        .map(|k| {
            mean + sigma * (T::lit(12.0) * T::from_usize_lossy(k) / T::from_usize_lossy(DENSITY_GRID_POINTS - 1) - T::lit(6.0))
        })
        .collect();
    let mut out = DensityConvergence {
        table: ConvergenceTable::new(
            "density",
            json!({
                "X": f64s(x.x), "z": cx_f64(z), "gamma": gamma.to_f64_lossy(),
                "grid": { "center": mean.to_f64_lossy(), "half_width_sigmas": 6, "points": DENSITY_GRID_POINTS },
                "inversion": { "nodes": spec.nodes, "tail_eps": spec.tail_eps.to_f64_lossy() },
            }),
        ),
        reductions: Vec::new(),
        measures: Vec::new(),
    };
    for &n in indices {
        let red = match density_reduction(x, z, gamma, n) {
            Ok(red) => red,
            Err(Error::Precision { message, .. } | Error::Domain(message)) => {
                out.table.push_skipped(n, re(limit.density_at(mean)), message);
                continue;
            }
            Err(e) => return Err(e),
        };
        let mu = fourier_invert_density(&red.star, spec)?;
        let d = mu.as_density().expect("inverted density");
        let (mut worst, mut at) = (T::zero(), mean);
        for &l in &grid {
            let e = (d.density_at(l) - limit.density_at(l)).abs();
            if e > worst {
                worst = e;
                at = l;
            }
        }
        out.table.push_error(n, re(d.density_at(at)), re(limit.density_at(at)), worst);
        out.reductions.push(red);
        out.measures.push((n, mu));
    }
    Ok(out)
}

/// `C' = inf (1/|F(t)| - 1) / t^2` over the sampled `t != 0`, the largest
/// constant with `|F(t)| <= (1 + C' t^2)^{-1}` on the samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominationFit<T> {
    pub c_prime: T,
    /// Index and `t` where the infimum is attained.
    pub index: u32,
    pub t: T,
    /// Largest `|F(t)| (1 + C' t^2)` over all samples, at most one up to rounding.
    pub max_ratio: T,
}

/// Fits the domination constant over the inversion grids of the measures.
pub fn fit_domination<T: Real>(measures: &[(u32, SpectralMeasure<T>)]) -> Result<DominationFit<T>> {
    let samples = |mu: &SpectralMeasure<T>| -> Result<(T, T, Vec<Cx<T>>)> {
        match mu.as_density().map(|d| d.source()) {
            Some(DensitySource::Inverted { t0, h, samples }) => Ok((*t0, *h, samples.clone())),
            _ => Err(Error::domain("domination fit needs inverted densities")),
        }
    };
    let mut fit = DominationFit {
        c_prime: T::infinity(),
        index: 0,
        t: T::zero(),
        max_ratio: T::zero(),
    };
    let tiny = T::lit(1e-12);
    for (n, mu) in measures {
        let (t0, h, f) = samples(mu)?;
        for (j, v) in f.iter().enumerate() {
            let t = t0 + h * T::from_usize_lossy(j);
            if t.abs() < tiny {
                continue;
            }
            let c = (T::one() / v.norm() - T::one()) / (t * t);
            if c < fit.c_prime {
                fit = DominationFit { c_prime: c, index: *n, t, ..fit };
            }
        }
    }
    if !fit.c_prime.is_finite() {
        return Err(Error::domain("no samples to fit"));
    }
    for (_, mu) in measures {
        let (t0, h, f) = samples(mu)?;
        for (j, v) in f.iter().enumerate() {
            let t = t0 + h * T::from_usize_lossy(j);
            fit.max_ratio = fit.max_ratio.max(v.norm() * (T::one() + fit.c_prime * t * t));
        }
    }
    Ok(fit)
}

/// `|<mu_m, phi> - <mu, phi>|` for the spectral measures of
/// `-i drho_m(C'_{r(m)} X)` at `z / sqrt(2 gamma m)` against the Fock Gaussian.
/// For `X = v1`, `z = 0` the measure is the binomial one and is built directly.
/// Away from `z = 0` the measures approach the Gaussian of `X` at `-z`, the
/// same parity twist as in [`parity_twist`], so the table limit is reached
/// only when `a1 x + a2 y = 0`.
pub fn weak_convergence_su2<T: Real>(
    x: &AlgebraVector<T>,
    z: Cx<T>,
    gamma: T,
    phi: &TestFunction<T>,
    indices: &[u32],
) -> Result<ConvergenceTable<T>> {
    let limit_mu = gaussian_density(gamma, x, z)?;
    let limit = re(pair_measure_test(&limit_mu, phi)?);
    let mut table = ConvergenceTable::new(
        "weak-su2",
        json!({ "X": f64s(x.x), "z": cx_f64(z), "gamma": gamma.to_f64_lossy(), "test": format!("{phi:?}") }),
    );
    let binomial_case = x.x == [T::one(), T::zero(), T::zero()] && z == Cx::new(T::zero(), T::zero());
    for &m in indices {
        let sched = ContractionSchedule::new(gamma, m)?;
        let mu = if binomial_case {
            binomial_measure(m, sched.r)?
        } else {
            let space = sched.space(MatrixGroup::SU2)?;
            let y = contraction_map(sched.r, x, MatrixGroup::SU2)?;
            spectral_measure_finite(&space, &y, sched.scaled_point(z))?
        };
        table.push(m, re(pair_measure_test(&mu, phi)?), limit);
    }
    Ok(table)
}
