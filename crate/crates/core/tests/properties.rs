use berezin::contraction::{bracket_contraction_defect, r_schedule};
use berezin::groups::{matrix_exp, matrix_log, AlgebraVector, GroupElement, HeisenbergElement, MatrixGroup};
use berezin::reps::{closed_form_symbol, cocycle_alpha, group_action, group_exp};
use berezin::spectral::{spectral_measure_finite, star_exponential, su2_closed_form_measure};
use berezin::{Cx, Space};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -1.5f64..1.5
}

fn triple() -> impl Strategy<Value = [f64; 3]> {
    [coord(), coord(), coord()]
}

fn point(radius: f64) -> impl Strategy<Value = Cx<f64>> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Cx::from_polar(r, t))
}

type MakeVector = fn(f64, f64, f64) -> AlgebraVector<f64>;

fn space_and_algebra(family: usize, param: u32) -> (Space, MakeVector, f64) {
    match family {
        0 => (Space::fock(0.5 + param as f64 / 4.0).unwrap(), AlgebraVector::heis, 1.5),
        1 => (Space::disc(3 + param % 6).unwrap(), AlgebraVector::su11, 0.6),
        _ => (Space::poly(1 + param).unwrap(), AlgebraVector::su2, 2.0),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schedule_satisfies_n_r_squared(n in 1u32..1_000_000, gamma in 0.01f64..100.0) {
        let r = r_schedule(n, gamma).unwrap();
        prop_assert!((n as f64 * r * r / (2.0 * gamma) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn cocycle_identity(family in 0usize..3, param in 0u32..12, x in triple(), y in triple(), z in point(0.6)) {
        let (space, make, _) = space_and_algebra(family, param);
        let g1 = group_exp(&make(x[0] / 3.0, x[1] / 3.0, x[2] / 3.0)).unwrap();
        let g2 = group_exp(&make(y[0] / 3.0, y[1] / 3.0, y[2] / 3.0)).unwrap();
        let w = group_action(&space, &g2, z).unwrap();
        let lhs = cocycle_alpha(&space, &g1.mul(&g2).unwrap(), z).unwrap();
        let rhs = cocycle_alpha(&space, &g1, w).unwrap() * cocycle_alpha(&space, &g2, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0));
    }

    #[test]
    fn symbols_of_unitaries_are_bounded(family in 0usize..3, param in 0u32..12, x in triple(), z in point(0.8)) {
        let (space, make, radius) = space_and_algebra(family, param);
        let z = z * radius;
        if space.contains(z) {
            let g = group_exp(&make(x[0], x[1], x[2])).unwrap();
            prop_assert!(closed_form_symbol(&space, &g, z).unwrap().norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn star_exponential_is_one_at_zero(family in 0usize..3, param in 0u32..12, x in triple(), z in point(0.5), t in -5.0f64..5.0) {
        let (space, make, _) = space_and_algebra(family, param);
        let f = star_exponential(&space, &make(x[0], x[1], x[2]), z).unwrap();
        prop_assert!((f.evaluate(0.0).unwrap() - Cx::new(1.0, 0.0)).norm() < 1e-14);
        prop_assert!(f.evaluate(t).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn exp_log_round_trip(x in triple(), su2 in any::<bool>()) {
        let v = if su2 { AlgebraVector::su2(x[0], x[1], x[2]) } else { AlgebraVector::su11(x[0], x[1], x[2]) };
        let back = matrix_log(&matrix_exp(&v).unwrap()).unwrap();
        for i in 0..3 {
            prop_assert!((back.x[i] - v.x[i]).abs() < 1e-10, "{:?} -> {:?}", v.x, back.x);
        }
    }

    #[test]
    fn heisenberg_law_is_associative(x in triple(), y in triple(), w in triple()) {
        let [a, b, c] = [x, y, w].map(|v| GroupElement::Heis(HeisenbergElement::new(v[0], v[1], v[2])));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        let (GroupElement::Heis(l), GroupElement::Heis(r)) = (left, right) else { unreachable!() };
        for (p, q) in l.coords().into_iter().zip(r.coords()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn bracket_defect_is_exactly_quadratic(x in triple(), y in triple(), r in 0.01f64..0.5, su2 in any::<bool>()) {
        let target = if su2 { MatrixGroup::SU2 } else { MatrixGroup::SU11 };
        let (xv, yv) = (AlgebraVector::heis(x[0], x[1], x[2]), AlgebraVector::heis(y[0], y[1], y[2]));
        let d1 = bracket_contraction_defect(r, &xv, &yv, target).unwrap();
        let d2 = bracket_contraction_defect(r / 2.0, &xv, &yv, target).unwrap();
        prop_assert!((d2 - d1 / 4.0).abs() <= 1e-12 * (1.0 + d1));
    }

    #[test]
    fn su2_eigen_and_closed_form_agree(m in 1u32..40, x in triple(), z in point(3.0)) {
        let poly = Space::poly(m).unwrap();
        let v = AlgebraVector::su2(x[0], x[1], x[2]);
        let eig = spectral_measure_finite(&poly, &v, z).unwrap();
        let closed = su2_closed_form_measure(&poly, &v, z).unwrap();
        let (a, b) = (eig.as_atomic().unwrap(), closed.as_atomic().unwrap());
        prop_assert!((a.total_mass() - 1.0).abs() < 1e-10);
        for k in 0..=m as usize {
            prop_assert!((a.locations[k] - b.locations[k]).abs() < 1e-9);
            prop_assert!((a.weights[k] - b.weights[k]).abs() < 1e-9);
        }
    }
}
