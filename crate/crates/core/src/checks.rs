//! Seeded randomized suites for the structural identities of the
//! representations, the exponential formula and the reproducing property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{
    expm_series, heis_mul, mat_mul, matrix_exp, Algebra, AlgebraVector, GroupElement, HeisenbergElement, MatrixGroup,
};
use crate::reps::{
    apply_pi, berezin_symbol_numeric, closed_form_symbol, cocycle_alpha, dpi_matrix, group_action,
    matrix_elements_pi, Operator, OperatorMatrix,
};
use crate::rkhs::{quadrature_inner_product, QuadratureSpec, SpaceKind, SpaceModel, TruncatedSeries};
use crate::scalar::Cx;

/// Tolerance for identities that hold exactly up to rounding.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for identities limited by the series truncation.
pub const TRUNCATION_TOL: f64 = 1e-8;
pub const REPRODUCING_TOL: f64 = 1e-10;
pub const QUADRATURE_TOL: f64 = 1e-9;
pub const EXP_TOL: f64 = 1e-12;

pub const STRUCTURAL_INSTANCES: usize = 100;
pub const REPRODUCING_INSTANCES: usize = 50;
pub const EXP_INSTANCES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Cocycle,
    Compatibility,
    Transport,
    KernelCovariance,
    Adjoint,
    SymbolCovariance,
    Homomorphism,
    Hermiticity,
    Reproducing,
    Quadrature,
    Exp,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Cocycle,
        Suite::Compatibility,
        Suite::Transport,
        Suite::KernelCovariance,
        Suite::Adjoint,
        Suite::SymbolCovariance,
        Suite::Homomorphism,
        Suite::Hermiticity,
        Suite::Reproducing,
        Suite::Quadrature,
        Suite::Exp,
    ];

    /// The suites of the structural identity criterion.
    pub const STRUCTURAL: [Suite; 6] = [
        Suite::Cocycle,
        Suite::Compatibility,
        Suite::Transport,
        Suite::KernelCovariance,
        Suite::Adjoint,
        Suite::SymbolCovariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Compatibility => "compatibility",
            Suite::Transport => "transport",
            Suite::KernelCovariance => "kernel-covariance",
            Suite::Adjoint => "adjoint",
            Suite::SymbolCovariance => "symbol-covariance",
            Suite::Homomorphism => "homomorphism",
            Suite::Hermiticity => "hermiticity",
            Suite::Reproducing => "reproducing",
            Suite::Quadrature => "quadrature",
            Suite::Exp => "exp",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::domain(format!("unknown suite {name:?}")))
    }

    fn salt(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64 + 1
    }
}

/// Outcome of one suite on one space (or algebra).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub target: String,
    pub instances: usize,
    pub tolerance: f64,
    pub max_error: f64,
    /// Instances that raised an error instead of producing a value.
    pub errors: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.max_error <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} [{}]: {} instances, max error {:.3e} (tol {:.0e}){}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite.name(),
            self.target,
            self.instances,
            self.max_error,
            self.tolerance,
            if self.errors.is_empty() {
                String::new()
            } else {
                format!(", {} errors, first: {}", self.errors.len(), self.errors[0])
            }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Family {
    Fock,
    Disc,
    Poly,
}

const FAMILIES: [Family; 3] = [Family::Fock, Family::Disc, Family::Poly];

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Fock => "fock",
            Family::Disc => "disc",
            Family::Poly => "poly",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Family::Fock => 1,
            Family::Disc => 2,
            Family::Poly => 3,
        }
    }
}

fn rng_for(seed: u64, suite: Suite, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ suite.salt().wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn point_in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Cx<f64> {
    let r = radius * rng.gen::<f64>().sqrt();
    Cx::from_polar(r, uniform(rng, 0.0, std::f64::consts::TAU))
}

/// A random space of the family, sized so that coherent states at the test
/// points are resolved by the default truncation.
fn random_space(rng: &mut ChaCha8Rng, family: Family) -> SpaceModel<f64> {
    match family {
        Family::Fock => SpaceModel::fock(uniform(rng, 0.5, 2.0)),
        Family::Disc => SpaceModel::disc(rng.gen_range(3..=6)),
        Family::Poly => SpaceModel::poly(rng.gen_range(1..=20)),
    }
    .expect("valid parameters")
}

/// Largest test radius for truncation-limited suites.
fn test_radius(family: Family) -> f64 {
    match family {
        Family::Fock => 1.5,
        Family::Disc => 0.7,
        Family::Poly => 2.0,
    }
}

fn random_element(rng: &mut ChaCha8Rng, space: &SpaceModel<f64>) -> GroupElement<f64> {
    match space.kind() {
        SpaceKind::Fock { .. } => GroupElement::Heis(HeisenbergElement::new(
            uniform(rng, -0.5, 0.5),
            uniform(rng, -0.5, 0.5),
            uniform(rng, -2.0, 2.0),
        )),
        SpaceKind::Disc { .. } => GroupElement::Matrix(
            matrix_exp(&AlgebraVector::su11(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -3.0, 3.0))).unwrap(),
        ),
        SpaceKind::Poly { .. } => GroupElement::Matrix(
            matrix_exp(&AlgebraVector::su2(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0))).unwrap(),
        ),
    }
}

/// A point `z` and element `g` with `|z|` and `|g . z|` inside the test radius.
fn random_pair(rng: &mut ChaCha8Rng, space: &SpaceModel<f64>, family: Family) -> (GroupElement<f64>, Cx<f64>) {
    let radius = test_radius(family);
    loop {
        let g = random_element(rng, space);
        let z = point_in_disc(rng, radius);
        if let Ok(gz) = group_action(space, &g, z) {
            if gz.norm() <= radius {
                return (g, z);
            }
        }
    }
}

fn rel_err(a: Cx<f64>, b: Cx<f64>) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// `|a - b| / max(|a|, |b|, 1)`, for symbols of operators of norm at most one
/// or of order one, whose values may vanish.
fn unit_err(a: Cx<f64>, b: Cx<f64>) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(suite: Suite, target: &str, tolerance: f64) -> Self {
        Tally {
            report: SuiteReport {
                suite,
                target: target.into(),
                instances: 0,
                tolerance,
                max_error: 0.0,
                errors: Vec::new(),
            },
        }
    }

    fn record(&mut self, outcome: Result<f64>) {
        self.report.instances += 1;
        match outcome {
            Ok(e) if e.is_finite() => self.report.max_error = self.report.max_error.max(e),
            Ok(e) => self.report.errors.push(format!("non-finite error {e}")),
            Err(e) => self.report.errors.push(e.to_string()),
        }
    }
}

fn per_space(seed: u64, suite: Suite, tolerance: f64, count: usize, mut body: impl FnMut(&mut ChaCha8Rng, Family) -> Result<f64>) -> Vec<SuiteReport> {
    FAMILIES
        .iter()
        .map(|&family| {
            let mut rng = rng_for(seed, suite, family.salt());
            let mut tally = Tally::new(suite, family.name(), tolerance);
            for _ in 0..count {
                let outcome = body(&mut rng, family);
                tally.record(outcome);
            }
            tally.report
        })
        .collect()
}

/// `alpha(g1 g2, z) = alpha(g1, g2 . z) alpha(g2, z)`.
fn cocycle(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Cocycle, ALGEBRAIC_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let (g2, z) = random_pair(rng, &space, family);
        let g1 = random_element(rng, &space);
        let lhs = cocycle_alpha(&space, &g1.mul(&g2)?, z)?;
        let rhs = cocycle_alpha(&space, &g1, group_action(&space, &g2, z)?)? * cocycle_alpha(&space, &g2, z)?;
        Ok(rel_err(lhs, rhs))
    })
}

/// `K(g . z) = |alpha(g, z)|^{-2} K(z)`.
fn compatibility(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Compatibility, ALGEBRAIC_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let (g, z) = random_pair(rng, &space, family);
        let lhs = space.kernel_weight(group_action(&space, &g, z)?);
        let rhs = space.kernel_weight(z) / cocycle_alpha(&space, &g, z)?.norm_sqr();
        Ok(rel_err(Cx::new(lhs, 0.0), Cx::new(rhs, 0.0)))
    })
}

/// `pi(g) e_z = conj(alpha(g, z)) e_{g . z}`, in norm relative to `||e_{g . z}||`.
fn transport(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Transport, TRUNCATION_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let (g, z) = random_pair(rng, &space, family);
        let gz = group_action(&space, &g, z)?;
        let image = apply_pi(&space, &g, &space.coherent_state(z)?.series)?.series;
        let expected = space.coherent_state(gz)?.series.scale(cocycle_alpha(&space, &g, z)?.conj());
        let diff = &image - &expected;
        Ok((space.norm_sqr(&diff)? / space.norm_sqr(&expected)?).sqrt())
    })
}

/// `k(g . z, g . w) = alpha(g, z)^{-1} conj(alpha(g, w))^{-1} k(z, w)`.
fn kernel_covariance(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::KernelCovariance, ALGEBRAIC_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let (g, z) = random_pair(rng, &space, family);
        let (_, w) = random_pair(rng, &space, family);
        let lhs = space.kernel(group_action(&space, &g, z)?, group_action(&space, &g, w)?);
        let rhs = space.kernel(z, w) / (cocycle_alpha(&space, &g, z)? * cocycle_alpha(&space, &g, w)?.conj());
        Ok(rel_err(lhs, rhs))
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> OperatorMatrix<f64> {
    let entries: Vec<Cx<f64>> = (0..dim * dim)
        .map(|_| Cx::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)))
        .collect();
    OperatorMatrix::from_fn(dim, |q, p| entries[q * dim + p])
}

/// `S(A*) = conj(S(A))` for a random low-rank matrix and for `pi(g)`, whose
/// adjoint is `pi(g^{-1})`.
fn adjoint(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Adjoint, TRUNCATION_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let (g, z) = random_pair(rng, &space, family);
        let dim = match space.kind() {
            SpaceKind::Poly { m } => (m as usize + 1).min(6),
            _ => 6,
        };
        let a = random_matrix(rng, dim);
        let s = berezin_symbol_numeric(&space, Operator::Matrix(&a), z)?;
        let s_adj = berezin_symbol_numeric(&space, Operator::Matrix(&a.adjoint()), z)?;
        let t = berezin_symbol_numeric(&space, Operator::Group(&g), z)?;
        let t_adj = berezin_symbol_numeric(&space, Operator::Group(&g.inverse()), z)?;
        Ok(unit_err(s_adj, s.conj()).max(unit_err(t_adj, t.conj())))
    })
}

/// `S(pi(g)^{-1} pi(h) pi(g))(z) = S(pi(h))(g . z)`, closed form to rounding
/// and from truncated coherent states.
fn symbol_covariance(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::SymbolCovariance, TRUNCATION_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let (g, z) = random_pair(rng, &space, family);
        let h = random_element(rng, &space);
        let conj = g.inverse().mul(&h)?.mul(&g)?;
        let gz = group_action(&space, &g, z)?;
        let closed = unit_err(closed_form_symbol(&space, &conj, z)?, closed_form_symbol(&space, &h, gz)?);
        if closed > ALGEBRAIC_TOL {
            return Err(Error::mismatch(format!("closed-form covariance defect {closed:e}")));
        }
        let numeric = berezin_symbol_numeric(&space, Operator::Group(&conj), z)?;
        Ok(unit_err(numeric, closed_form_symbol(&space, &h, gz)?))
    })
}

pub const HOMOMORPHISM_INSTANCES: usize = 20;
/// Columns summed over in `M(g1) M(g2)`; the leading 9x9 blocks are compared.
pub const HOMOMORPHISM_DEGREE: usize = 64;

/// Leading blocks of `M(g1 g2)` and `M(g1) M(g2)`.
fn homomorphism(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Homomorphism, TRUNCATION_TOL, HOMOMORPHISM_INSTANCES, |rng, family| {
        let space = random_space(rng, family).with_truncation(HOMOMORPHISM_DEGREE);
        let g1 = random_element(rng, &space);
        let g2 = random_element(rng, &space);
        let pmax = match space.kind() {
            SpaceKind::Poly { m } => m as usize,
            _ => HOMOMORPHISM_DEGREE,
        };
        let block = pmax.min(8) + 1;
        let prod = matrix_elements_pi(&space, &g1.mul(&g2)?, pmax)?;
        let m1 = matrix_elements_pi(&space, &g1, pmax)?;
        let m2 = matrix_elements_pi(&space, &g2, pmax)?;
        Ok(prod.leading_block(block).max_abs_diff(&m1.matmul(&m2)?.leading_block(block)))
    })
}

/// `-i dpi(X)` is Hermitian on its leading block.
fn hermiticity(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Hermiticity, ALGEBRAIC_TOL, STRUCTURAL_INSTANCES, |rng, family| {
        let space = random_space(rng, family);
        let algebra = crate::reps::algebra_for(&space);
        let x = AlgebraVector::new(algebra, uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
        let size = match space.kind() {
            SpaceKind::Poly { m } => m as usize + 1,
            _ => 64,
        };
        let m = dpi_matrix(&space, &x, size)?;
        let scale = (0..size).fold(1.0f64, |s, q| (0..size).fold(s, |s, p| s.max(m.get(q, p).norm())));
        Ok(m.hermiticity_defect(size) / scale)
    })
}

fn random_polynomial(rng: &mut ChaCha8Rng, degree: usize) -> TruncatedSeries<f64> {
    TruncatedSeries::new(
        (0..=degree)
            .map(|_| Cx::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)))
            .collect(),
    )
}

/// Truncation for the reproducing suite.
pub const REPRODUCING_TRUNCATION: usize = 256;

/// `<f, e_z> = f(z)` for random polynomials of degree at most 16.
fn reproducing(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Reproducing, REPRODUCING_TOL, REPRODUCING_INSTANCES, |rng, family| {
        let space = match family {
            Family::Fock => SpaceModel::fock(uniform(rng, 0.5, 2.0))?,
            Family::Disc => SpaceModel::disc(rng.gen_range(3..=8))?,
            Family::Poly => SpaceModel::poly(rng.gen_range(16..=40))?,
        }
        .with_truncation(REPRODUCING_TRUNCATION);
        let degree = rng.gen_range(0..=16);
        let f = random_polynomial(rng, degree);
        let radius = match family {
            Family::Fock | Family::Poly => 2.0,
            Family::Disc => 1.0 - space.disc_margin(),
        };
        let z = point_in_disc(rng, radius);
        let e = space.coherent_state_with(z, REPRODUCING_TRUNCATION)?.series;
        Ok((space.inner_product(&f, &e)? - f.evaluate(z)).norm())
    })
}

/// Quadrature against the diagonal inner product for degree at most 8,
/// relative to `||f|| ||g||`.
fn quadrature(seed: u64) -> Vec<SuiteReport> {
    per_space(seed, Suite::Quadrature, QUADRATURE_TOL, REPRODUCING_INSTANCES, |rng, family| {
        let space = match family {
            Family::Fock => SpaceModel::fock(uniform(rng, 0.5, 2.0))?,
            Family::Disc => SpaceModel::disc(rng.gen_range(3..=8))?,
            Family::Poly => SpaceModel::poly(rng.gen_range(8..=20))?,
        };
        let (df, dg) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
        let f = random_polynomial(rng, df);
        let g = random_polynomial(rng, dg);
        let exact = space.inner_product(&f, &g)?;
        let quad = quadrature_inner_product(&f, &g, &space, &QuadratureSpec::default())?;
        Ok((quad - exact).norm() / (space.norm_sqr(&f)? * space.norm_sqr(&g)?).sqrt())
    })
}

fn random_algebra_vector(rng: &mut ChaCha8Rng, algebra: Algebra, k: usize) -> AlgebraVector<f64> {
    let (x1, x2, x3) = (uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    match k % 4 {
        // near-degenerate: |R^2| < 1e-6
        0 if algebra == Algebra::Su11 => {
            let eps = uniform(rng, -4e-6, 4e-6);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            AlgebraVector::su11(x1, x2, sign * (x1 * x1 + x2 * x2 - eps).max(0.0).sqrt())
        }
        0 => AlgebraVector::new(algebra, x1, x2, x3).scale(10f64.powf(uniform(rng, -6.0, -3.3))),
        _ => AlgebraVector::new(algebra, x1, x2, x3),
    }
}

/// `matrix_exp` against the scaling-and-squaring series, entrywise relative to
/// `max(1, |entry|)`.
fn exp_oracle(seed: u64) -> Vec<SuiteReport> {
    [(Algebra::Su11, "su11", 1u64), (Algebra::Su2, "su2", 2u64)]
        .iter()
        .map(|&(algebra, name, salt)| {
            let mut rng = rng_for(seed, Suite::Exp, salt);
            let mut tally = Tally::new(Suite::Exp, name, EXP_TOL);
            for k in 0..EXP_INSTANCES {
                let x = random_algebra_vector(&mut rng, algebra, k);
                let outcome = (|| -> Result<f64> {
                    let got = matrix_exp(&x)?.to_matrix();
                    let want = expm_series(&x.to_matrix()?);
                    let mut worst = 0.0f64;
                    for i in 0..2 {
                        for j in 0..2 {
                            worst = worst.max((got[i][j] - want[i][j]).norm() / want[i][j].norm().max(1.0));
                        }
                    }
                    Ok(worst)
                })();
                tally.record(outcome);
            }
            tally.report
        })
        .collect()
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<SuiteReport> {
    match suite {
        Suite::Cocycle => cocycle(seed),
        Suite::Compatibility => compatibility(seed),
        Suite::Transport => transport(seed),
        Suite::KernelCovariance => kernel_covariance(seed),
        Suite::Adjoint => adjoint(seed),
        Suite::SymbolCovariance => symbol_covariance(seed),
        Suite::Homomorphism => homomorphism(seed),
        Suite::Hermiticity => hermiticity(seed),
        Suite::Reproducing => reproducing(seed),
        Suite::Quadrature => quadrature(seed),
        Suite::Exp => exp_oracle(seed),
    }
}

pub fn run_suites(suites: &[Suite], seed: u64) -> Vec<SuiteReport> {
    suites.iter().flat_map(|&s| run_suite(s, seed)).collect()
}

/// `exp((s + t) X) = exp(sX) exp(tX)` for the Heisenberg exponential, which
/// has no matrix model to compare against.
pub fn heisenberg_one_parameter_defect(x: &AlgebraVector<f64>, s: f64, t: f64) -> Result<f64> {
    let e = |u: f64| crate::groups::heis_exp(&x.scale(u));
    let lhs = e(s + t)?;
    let rhs = heis_mul(&e(s)?, &e(t)?);
    Ok((0..3).fold(0.0f64, |m, i| m.max((lhs.coords()[i] - rhs.coords()[i]).abs())))
}

/// `exp(X) exp(-X) = I` in the matrix groups.
pub fn matrix_inverse_defect(x: &AlgebraVector<f64>) -> Result<f64> {
    let p = matrix_exp(x)?.to_matrix();
    let q = matrix_exp(&x.scale(-1.0))?.to_matrix();
    let m = mat_mul(&p, &q);
    let id = crate::groups::Matrix2Element::<f64>::identity(match x.algebra {
        Algebra::Su11 => MatrixGroup::SU11,
        _ => MatrixGroup::SU2,
    })
    .to_matrix();
    Ok(crate::groups::mat_dist(&m, &id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::group_exp;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        assert_eq!(run_suite(Suite::Cocycle, 7), run_suite(Suite::Cocycle, 7));
    }

    #[test]
    fn group_exp_is_used_consistently() {
        let x = AlgebraVector::su2(0.3, -0.2, 1.1);
        assert!(matrix_inverse_defect(&x).unwrap() < 1e-15);
        assert!(matches!(group_exp(&x).unwrap(), GroupElement::Matrix(_)));
        assert_eq!(heisenberg_one_parameter_defect(&AlgebraVector::heis(1.0, 2.0, 3.0), 0.5, -1.5).unwrap(), 0.0);
    }
}
