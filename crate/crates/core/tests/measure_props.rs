mod common;

use common::{apply_unitary, c64, local_unitary, pure_state};
use proptest::prelude::*;
use tritangle::linalg::{partial_trace, ComplexMatrix, Subsystem};
use tritangle::measures::{
    concurrence_fill, concurrence_fill_tau_form, full_report, pure_one_to_other, rank2_itangle,
    residual_entanglement_pure, spectral_itangle, wootters_concurrence, xstate_concurrence, Focus, MeasureReport,
};
use tritangle::states::{DensityMatrix, PureState};

fn values(r: &MeasureReport) -> Vec<f64> {
    let mut v = vec![r.c_ab, r.c_ac, r.c_bc, r.c2_a_bc, r.c2_b_ac, r.c2_c_ab, r.linear_entropy];
    v.extend([r.tau, r.gtc, r.fill].iter().flatten());
    v
}

fn rank_two(p: f64, a: &PureState, b: &PureState) -> DensityMatrix {
    DensityMatrix::mixture(&[(p, &a.density()), (1.0 - p, &b.density())]).unwrap()
}

/// Two-qubit X state from populations and the two coherences, scaled into range.
fn x_state() -> impl Strategy<Value = ComplexMatrix> {
    (prop::array::uniform4(0.0..1.0f64), c64(), c64(), 0.0..=1.0f64, 0.0..=1.0f64).prop_filter_map(
        "nonzero populations",
        |(p, z14, z23, s14, s23)| {
            let total: f64 = p.iter().sum();
            if total < 1e-3 {
                return None;
            }
            let p = p.map(|x| x / total);
            let z14 = z14 / z14.norm().max(1e-300) * s14 * (p[0] * p[3]).sqrt();
            let z23 = z23 / z23.norm().max(1e-300) * s23 * (p[1] * p[2]).sqrt();
            let mut m = ComplexMatrix::real_diag(&p);
            m[(0, 3)] = z14;
            m[(3, 0)] = z14.conj();
            m[(1, 2)] = z23;
            m[(2, 1)] = z23.conj();
            Some(m)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ckw_monogamy(psi in pure_state()) {
        let r = full_report(&psi.density()).unwrap();
        for (c2, x, y) in [(r.c2_a_bc, r.c_ab, r.c_ac), (r.c2_b_ac, r.c_ab, r.c_bc), (r.c2_c_ab, r.c_ac, r.c_bc)] {
            prop_assert!(c2 - x * x - y * y >= -1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_unitaries_leave_pure_measures_unchanged(psi in pure_state(), u in local_unitary()) {
        let before = values(&full_report(&psi.density()).unwrap());
        let after = values(&full_report(&apply_unitary(&u, &psi).density()).unwrap());
        prop_assert_eq!(before.len(), after.len());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn local_unitaries_leave_rank_two_measures_unchanged(
        a in pure_state(), b in pure_state(), p in 0.05..0.95f64, u in local_unitary(),
    ) {
        let rho = rank_two(p, &a, &b);
        let rotated = rank_two(p, &apply_unitary(&u, &a), &apply_unitary(&u, &b));
        let (before, after) = (values(&full_report(&rho).unwrap()), values(&full_report(&rotated).unwrap()));
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn residual_entanglement_is_focus_independent(psi in pure_state()) {
        let r = full_report(&psi.density()).unwrap();
        let tau = residual_entanglement_pure(&psi).unwrap();
        let via_b = r.c2_b_ac - r.c_ab * r.c_ab - r.c_bc * r.c_bc;
        let via_c = r.c2_c_ab - r.c_ac * r.c_ac - r.c_bc * r.c_bc;
        prop_assert!((tau - via_b).abs() < 1e-9 && (tau - via_c).abs() < 1e-9);
    }

    #[test]
    fn rank_two_route_agrees_on_pure_states(psi in pure_state()) {
        let rho = psi.density();
        for f in Focus::ALL {
            let c = pure_one_to_other(&psi, f).unwrap();
            prop_assert!((rank2_itangle(&rho, f).unwrap() - c * c).abs() < 1e-10);
            prop_assert!((spectral_itangle(&rho, f).unwrap() - rank2_itangle(&rho, f).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn fill_forms_agree(psi in pure_state()) {
        let rho = psi.density();
        let pair = |s| wootters_concurrence(&partial_trace(rho.matrix(), s)).unwrap().powi(2);
        let tau = residual_entanglement_pure(&psi).unwrap();
        let via_tau = concurrence_fill_tau_form(tau, pair(Subsystem::AB), pair(Subsystem::AC), pair(Subsystem::BC));
        prop_assert!((concurrence_fill(&psi).unwrap() - via_tau.unwrap()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn x_state_shortcut_matches_wootters(m in x_state()) {
        let x = xstate_concurrence(&m).unwrap();
        let w = wootters_concurrence(&m).unwrap();
        prop_assert!((x - w).abs() < 1e-12, "{x} vs {w}");
    }
}
