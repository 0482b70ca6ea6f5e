use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use berezin::checks::{run_suite, Suite, EXP_INSTANCES, REPRODUCING_INSTANCES, STRUCTURAL_INSTANCES};
use berezin::contraction::{
    density_convergence, doubling_indices, fit_domination, heisenberg_matrix_element, matrix_element_convergence,
    symbol_convergence, weak_convergence_su2,
};
use berezin::groups::{AlgebraVector, HeisenbergElement, MatrixGroup};
use berezin::spectral::{
    binomial_measure, fourier_invert_density, spectral_measure_finite, star_exponential, InversionSpec, TestFunction,
};
use berezin::{Cx, Space};

const C1_TOL: f64 = 1e-8;
const C1_NODES: usize = 1 << 14;
const C1_RUNTIME: Duration = Duration::from_secs(1);
const C2_TOL: f64 = 1e-10;
const C3_TOL: f64 = 5e-3;
const C4_TOL: f64 = 1e-2;
const C4_RATIO: (f64, f64) = (0.4, 0.6);
const C5_TOL: f64 = 1e-2;
const C5_INDEX: u32 = 10_000;
const C5_TRUNCATION: usize = 128;
const SEED: u64 = 20_261_016;

type Outcome = (bool, String);

fn gaussian(mean: f64, variance: f64, l: f64) -> f64 {
    (-(l - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
}

/// Sup error of the inverted density against a Gaussian over `[-6, 6]` about its mean.
fn inversion_error(gamma: f64, x: AlgebraVector<f64>, z: Cx<f64>, mean: f64, variance: f64) -> (f64, Duration) {
    let fock = Space::fock(gamma).unwrap();
    let spec = InversionSpec {
        nodes: C1_NODES,
        ..InversionSpec::default()
    };
    let start = Instant::now();
    let mu = fourier_invert_density(&star_exponential(&fock, &x, z).unwrap(), &spec).unwrap();
    let elapsed = start.elapsed();
    let d = mu.as_density().unwrap();
    let worst = (0..=1200)
        .map(|k| mean - 6.0 + 0.01 * k as f64)
        .map(|l| (d.density_at(l) - gaussian(mean, variance, l)).abs())
        .fold(0.0, f64::max);
    (worst, elapsed)
}

fn criterion_1_gaussian_density() -> Outcome {
    let (err, time) = inversion_error(1.0, AlgebraVector::heis(1.0, 0.0, 0.0), Cx::new(0.0, 0.0), 0.0, 0.5);
    let mut passed = err < C1_TOL && time < C1_RUNTIME;
    let mut detail = format!("gamma=1 X=v1 z=0: sup error {err:.2e} in {time:?}");
    for gamma in [0.5, 2.0] {
        // mean a1 x + a2 y + a3 gamma = 2, variance gamma (a1^2 + a2^2) / 2 = gamma
        let (e, t) = inversion_error(gamma, AlgebraVector::heis(1.0, 1.0, 0.0), Cx::new(1.0, 1.0), 2.0, gamma);
        passed &= e < C1_TOL && t < C1_RUNTIME;
        detail += &format!("; gamma={gamma} X=v1+v2 z=1+i: {e:.2e} in {t:?}");
    }
    (passed, detail)
}

fn binom(m: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (m - j) as f64 / (j + 1) as f64)
}

fn criterion_2_su2_binomial() -> Outcome {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for m in [2u32, 8, 32, 128] {
        let poly = Space::poly(m).unwrap();
        let mu = spectral_measure_finite(&poly, &AlgebraVector::su2(1.0, 0.0, 0.0), Cx::new(0.0, 0.0)).unwrap();
        let a = mu.as_atomic().unwrap().clone();
        let b = binomial_measure(m, 1.0).unwrap().as_atomic().unwrap().clone();
        if a.locations.len() != m as usize + 1 {
            return (false, format!("m={m}: {} atoms", a.locations.len()));
        }
        let mut e = 0.0f64;
        for k in 0..=m {
            let (l, w) = (a.locations[k as usize], a.weights[k as usize]);
            let exact_w = binom(m, k) * 0.5f64.powi(m as i32);
            e = e
                .max((l - (k as f64 - m as f64 / 2.0)).abs())
                .max((w - exact_w).abs())
                .max((l - b.locations[k as usize]).abs())
                .max((w - b.weights[k as usize]).abs());
        }
        detail += &format!("m={m}: {e:.1e}; ");
        worst = worst.max(e);
    }
    let passed = worst < C2_TOL;
    (passed, detail)
}

fn criterion_3_de_moivre_laplace() -> Outcome {
    // int pi^{-1/2} e^{-l^2} e^{-l^2} dl = 1 / sqrt(2)
    let phi = TestFunction::gaussian(0.0, FRAC_1_SQRT_2);
    let table = weak_convergence_su2(&AlgebraVector::heis(1.0, 0.0, 0.0), Cx::new(0.0, 0.0), 1.0, &phi, &[128, 512, 2048]).unwrap();
    let errors: Vec<f64> = table
        .rows
        .iter()
        .map(|r| (r.value.unwrap().re - FRAC_1_SQRT_2).abs())
        .collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let passed = errors[2] < C3_TOL && decreasing;
    let shown: Vec<String> = errors.iter().map(|e| format!("{e:.3e}")).collect();
    (passed, format!("errors at m=128,512,2048: {}", shown.join(" ")))
}

fn criterion_4_symbol_contraction() -> Outcome {
    let h = HeisenbergElement::new(1.0, 1.0, 1.0);
    let z = Cx::new(1.0, 1.0);
    // exp(i gamma a3 - gamma (a1^2 + a2^2) / 4 + i (a1 x + a2 y))
    let limit = Cx::new(-0.5, 3.0).exp();
    let doublings = symbol_convergence(&h, z, 1.0, &doubling_indices(7, 14), MatrixGroup::SU11).unwrap();
    let at = symbol_convergence(&h, z, 1.0, &[10_000], MatrixGroup::SU11).unwrap();
    let err = (at.rows[0].value.unwrap() - limit).norm();
    let ratios = doublings.doubling_ratios();
    let in_band = ratios.len() == 7 && ratios.iter().all(|&(_, q)| (C4_RATIO.0..=C4_RATIO.1).contains(&q));
    let passed = err < C4_TOL && in_band && (at.rows[0].limit - limit).norm() < 1e-15;
    let shown: Vec<String> = ratios.iter().map(|(n, q)| format!("{n}:{q:.4}")).collect();
    (passed, format!("error at n=1e4 {err:.3e}; doubling ratios {}", shown.join(" ")))
}

fn matrix_element_worst(target: MatrixGroup) -> (f64, String) {
    let mut worst = (0.0f64, String::new());
    for h in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let h = HeisenbergElement::new(h[0], h[1], h[2]);
        for p in 0..=3 {
            for q in 0..=3 {
                let t = matrix_element_convergence(&h, 1.0, p, q, &[C5_INDEX], target, C5_TRUNCATION).unwrap();
                let e = t.rows[0].abs_error.unwrap();
                if e >= worst.0 {
                    worst = (e, format!("h={:?} p={p} q={q}", h.coords()));
                }
            }
        }
    }
    worst
}

fn criterion_5_matrix_element_contraction() -> Outcome {
    let (su11, at11) = matrix_element_worst(MatrixGroup::SU11);
    let (su2, at2) = matrix_element_worst(MatrixGroup::SU2);
    let passed = su11 < C5_TOL && su2 < C5_TOL && central_character_defect() < 1e-14;
    (
        passed,
        format!("worst SU(1,1) error {su11:.3e} ({at11}); worst SU(2) error {su2:.3e} ({at2})"),
    )
}

/// The central element acts by the character `e^{i gamma a3}` in the Fock oracle.
fn central_character_defect() -> f64 {
    let mut worst = 0.0f64;
    for p in 0..=3 {
        for q in 0..=3 {
            let v = heisenberg_matrix_element(1.0, &HeisenbergElement::new(0.0, 0.0, 1.0), p, q, C5_TRUNCATION).unwrap();
            let want = if p == q { Cx::new(0.0, 1.0).exp() } else { Cx::new(0.0, 0.0) };
            worst = worst.max((v - want).norm());
        }
    }
    worst
}

fn suites_pass(suites: &[Suite], instances: &[(Suite, usize)]) -> Outcome {
    let mut passed = true;
    let mut lines = Vec::new();
    for &s in suites {
        for r in run_suite(s, SEED) {
            let want = instances.iter().find(|(t, _)| *t == s).map(|(_, n)| *n).unwrap();
            passed &= r.passed() && r.instances == want;
            lines.push(format!("\n    {}", r.line()));
        }
    }
    (passed, format!("{} suite runs{}", lines.len(), lines.concat()))
}

fn criterion_6_structural_identities() -> Outcome {
    let counts: Vec<(Suite, usize)> = Suite::STRUCTURAL.iter().map(|&s| (s, STRUCTURAL_INSTANCES)).collect();
    suites_pass(&Suite::STRUCTURAL, &counts)
}

fn criterion_7_exponential_formula() -> Outcome {
    suites_pass(&[Suite::Exp], &[(Suite::Exp, EXP_INSTANCES)])
}

fn criterion_8_domination_bound() -> Outcome {
    let x = AlgebraVector::heis(1.0, 1.0, 0.0);
    let out = density_convergence(&x, Cx::new(1.0, 1.0), 1.0, &doubling_indices(7, 14), &InversionSpec::default()).unwrap();
    let fit = fit_domination(&out.measures).unwrap();
    let passed = out.measures.len() == 8 && fit.c_prime > 0.0 && fit.max_ratio <= 1.0 + 1e-12;
    (
        passed,
        format!(
            "C' = {:.4} (attained at n={}, t={:.3}); max |F_n(t)| (1 + C't^2) = {:.15}",
            fit.c_prime, fit.index, fit.t, fit.max_ratio
        ),
    )
}

fn criterion_9_reproducing_property() -> Outcome {
    suites_pass(
        &[Suite::Reproducing, Suite::Quadrature],
        &[(Suite::Reproducing, REPRODUCING_INSTANCES), (Suite::Quadrature, REPRODUCING_INSTANCES)],
    )
}

fn main() {
    assert_eq!(STRUCTURAL_INSTANCES, 100);
    assert_eq!(EXP_INSTANCES, 1000);
    assert_eq!(REPRODUCING_INSTANCES, 50);
    let criteria: [fn() -> Outcome; 9] = [
        criterion_1_gaussian_density,
        criterion_2_su2_binomial,
        criterion_3_de_moivre_laplace,
        criterion_4_symbol_contraction,
        criterion_5_matrix_element_contraction,
        criterion_6_structural_identities,
        criterion_7_exponential_formula,
        criterion_8_domination_bound,
        criterion_9_reproducing_property,
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria.iter().enumerate() {
        let (passed, detail) = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        println!("criterion {}: {} {detail}", k + 1, if passed { "PASS" } else { "FAIL" });
        if !passed {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
