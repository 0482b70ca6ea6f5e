use berezin::contraction::{
    alpha_limit, beta_limit, bracket_contraction_defect, contracted_group_element, density_reduction, doubling_indices,
    group_contraction_defect, heisenberg_matrix_element, matrix_element_convergence, parity_twist, symbol_convergence,
    weak_convergence_su2, ContractionSchedule,
};
use berezin::groups::{AlgebraVector, GroupElement, HeisenbergElement, MatrixGroup};
use berezin::reps::closed_form_symbol;
use berezin::spectral::{gaussian_density, pair_measure_test, TestFunction};
use berezin::{Cx, Space};

const TARGETS: [MatrixGroup; 2] = [MatrixGroup::SU11, MatrixGroup::SU2];

fn fock_symbol(gamma: f64, h: &HeisenbergElement<f64>, z: Cx<f64>) -> Cx<f64> {
    closed_form_symbol(&Space::fock(gamma).unwrap(), &GroupElement::Heis(*h), z).unwrap()
}

#[test]
fn alpha_beta_limits_at_rate_one_over_n() {
    let h = HeisenbergElement::new(0.7, -1.3, 0.4);
    let gamma = 1.5;
    for target in TARGETS {
        let err = |n: u32| {
            let s = ContractionSchedule::new(gamma, n).unwrap();
            let g = contracted_group_element(&h, &s, target).unwrap();
            let nn = n as f64;
            let ea = ((g.alpha - 1.0) * nn - alpha_limit(gamma, &h, target)).norm();
            let eb = (g.beta * nn / (2.0 * gamma * nn).sqrt() - beta_limit(&h, target)).norm();
            (ea, eb)
        };
        let (a1, b1) = err(1 << 10);
        let (a2, b2) = err(1 << 11);
        assert!(a1 < 1e-2 && b1 < 1e-2, "{target:?}: {a1:e} {b1:e}");
        assert!((a2 / a1 - 0.5).abs() < 0.01 && (b2 / b1 - 0.5).abs() < 0.01, "{target:?}: {} {}", a2 / a1, b2 / b1);
    }
}

#[test]
fn contracted_scalars_match_the_exponential() {
    let h = HeisenbergElement::new(1.0, 2.0, -0.5);
    for target in TARGETS {
        for n in [3, 40, 5000] {
            let g = contracted_group_element(&h, &ContractionSchedule::new(1.0, n).unwrap(), target).unwrap();
            assert!((g.target.a - g.alpha).norm() < 1e-13 && (g.target.b - g.beta).norm() < 1e-13);
        }
    }
}

/// Slope of `log defect` against `log r`.
fn loglog_slope(samples: &[(f64, f64)]) -> f64 {
    let k = samples.len() as f64;
    let (sx, sy) = samples.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = samples
        .iter()
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + (x.ln() - mx) * (y.ln() - my), d + (x.ln() - mx).powi(2)));
    num / den
}

#[test]
fn group_and_bracket_defects_vanish_quadratically() {
    let x = HeisenbergElement::new(0.8, -0.3, 0.5);
    let y = HeisenbergElement::new(-0.2, 0.6, 1.1);
    let (xv, yv) = (AlgebraVector::heis(0.8, -0.3, 0.5), AlgebraVector::heis(-0.2, 0.6, 1.1));
    for target in TARGETS {
        let rs: Vec<f64> = (3..9).map(|k| 0.5f64.powi(k)).collect();
        let group: Vec<(f64, f64)> = rs.iter().map(|&r| (r, group_contraction_defect(r, &x, &y, target).unwrap())).collect();
        let brackets: Vec<(f64, f64)> =
            rs.iter().map(|&r| (r, bracket_contraction_defect(r, &xv, &yv, target).unwrap())).collect();
        assert!((loglog_slope(&group) - 2.0).abs() < 0.1, "{target:?} group slope {}", loglog_slope(&group));
        assert!((loglog_slope(&brackets) - 2.0).abs() < 1e-6, "{target:?} bracket slope {}", loglog_slope(&brackets));
    }
}

#[test]
fn su11_symbol_table_skips_and_decreases() {
    let table = symbol_convergence(&HeisenbergElement::new(1.0, 1.0, 1.0), Cx::new(1.0, 1.0), 1.0, &[1, 2, 16, 64, 256, 1024], MatrixGroup::SU11)
        .unwrap();
    assert_eq!(table.rows.iter().filter(|r| r.skipped.is_some()).count(), 2);
    assert!(table.is_monotone());
    assert!(table.to_csv().lines().nth(1).unwrap().starts_with("1,skipped,skipped,"));
}

#[test]
fn identity_has_zero_errors() {
    for target in TARGETS {
        let table = symbol_convergence(&HeisenbergElement::identity(), Cx::new(0.4, -0.2), 2.0, &doubling_indices(4, 8), target).unwrap();
        assert!(table.errors().iter().all(|&(_, e)| e < 1e-14));
    }
}

#[test]
fn su2_symbol_at_origin_is_a_cosine_power() {
    let t = 1.3f64;
    let h = HeisenbergElement::new(t, 0.0, 0.0);
    let table = symbol_convergence(&h, Cx::new(0.0, 0.0), 1.0, &doubling_indices(4, 12), MatrixGroup::SU2).unwrap();
    for row in &table.rows {
        let r = ContractionSchedule::<f64>::new(1.0, row.index).unwrap().r;
        let exact = (t * r / 2.0).cos().powi(row.index as i32);
        assert!((row.value.unwrap().re - exact).abs() < 1e-12);
        assert!((row.limit.re - (-t * t / 4.0f64).exp()).abs() < 1e-15);
    }
    assert!(table.is_monotone());
}

/// The SU(2) limits are the Fock objects of `theta h`: symbols and matrix
/// elements converge there, while against `h` the odd `p + q` elements keep
/// their sign flip.
#[test]
fn su2_limits_are_parity_twisted() {
    let h = HeisenbergElement::new(1.0, 1.0, 1.0);
    let z = Cx::new(1.0, 1.0);
    let table = symbol_convergence(&h, z, 1.0, &[10_000], MatrixGroup::SU2).unwrap();
    let value = table.rows[0].value.unwrap();
    assert!((value - fock_symbol(1.0, &parity_twist(&h), z)).norm() < 1e-2);
    assert!((value - fock_symbol(1.0, &h, z)).norm() > 0.5);

    for h in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let h = HeisenbergElement::new(h[0], h[1], h[2]);
        for p in 0..=3 {
            for q in 0..=3 {
                let t = matrix_element_convergence(&h, 1.0, p, q, &[10_000], MatrixGroup::SU2, 128).unwrap();
                let got = t.rows[0].value.unwrap();
                let twisted = heisenberg_matrix_element(1.0, &parity_twist(&h), p, q, 128).unwrap();
                let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((got - twisted).norm() < 1e-2, "h={:?} p={p} q={q}", h.coords());
                assert!((twisted - t.rows[0].limit * sign).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn weak_pairing_with_constant_is_total_mass() {
    let table = weak_convergence_su2(&AlgebraVector::heis(1.0, 0.0, 0.0), Cx::new(0.0, 0.0), 1.0, &TestFunction::constant(1.0), &[2])
        .unwrap();
    assert!((table.rows[0].value.unwrap().re - 1.0f64).abs() < 1e-15);
    assert!(table.rows[0].abs_error.unwrap() < 1e-12);
}

#[test]
fn weak_convergence_away_from_origin_is_parity_twisted() {
    let phi = TestFunction::gaussian(0.5, 1.0);
    let x = AlgebraVector::heis(0.6, -0.8, 0.3);
    let z = Cx::new(0.5, 0.2);
    let table = weak_convergence_su2(&x, z, 1.0, &phi, &[32, 128, 512]).unwrap();
    let twisted: f64 = pair_measure_test(&gaussian_density(1.0, &x, -z).unwrap(), &phi).unwrap();
    let errors: Vec<f64> = table.rows.iter().map(|r| (r.value.unwrap().re - twisted).abs()).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]) && errors[2] < 1e-3, "{errors:?}");
    assert!(table.error_at(512).unwrap() > 1e-2);
}

#[test]
fn density_reduction_preserves_the_invariant_form() {
    for n in doubling_indices(4, 12) {
        let red = density_reduction(&AlgebraVector::heis(1.0, 0.0, 0.0), Cx::new(0.0, 0.0), 1.0, n).unwrap();
        assert!(red.invariant_defect < 1e-10, "n={n}");
        assert!(red.d_sqr > 0.0);
    }
    let red = density_reduction(&AlgebraVector::heis(1.0, 1.0, 0.5), Cx::new(1.0, -1.0), 2.0, 4096).unwrap();
    assert!(red.invariant_defect < 1e-10);
}
