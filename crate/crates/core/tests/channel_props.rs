mod common;

use common::mixed_state;
use proptest::prelude::*;
use tritangle::channels::{adc, apply, gadc, nonmarkov_dephasing, pdc, KrausChannel, Placement};
use tritangle::linalg::{herm_eig, kron, partial_trace, ComplexMatrix, Subsystem};
use tritangle::states::{gghz, validate, w, DensityMatrix};

fn channel() -> impl Strategy<Value = KrausChannel> {
    prop_oneof![
        (0.0..=1.0f64).prop_map(|d| pdc(d).unwrap()),
        (0.0..=1.0f64).prop_map(|d| adc(d).unwrap()),
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(d, p)| gadc(d, p).unwrap()),
        (-1.0..=1.0f64).prop_map(|l| nonmarkov_dephasing(l).unwrap()),
    ]
}

fn placement() -> impl Strategy<Value = Placement> {
    prop_oneof![
        Just(Placement::FirstQubit),
        Just(Placement::SecondQubit),
        Just(Placement::ThirdQubit),
        Just(Placement::AllQubits),
    ]
}

fn rank(rho: &DensityMatrix) -> usize {
    herm_eig(rho.matrix(), 1e-13).unwrap().eigenvalues.iter().filter(|&&l| l > 1e-10).count()
}

/// Σ_{ijk} (K_i⊗K_j⊗K_k) ρ (K_i⊗K_j⊗K_k)†
fn all_qubits_reference(rho: &ComplexMatrix, ch: &KrausChannel) -> ComplexMatrix {
    let ops = ch.operators();
    let mut out = ComplexMatrix::zeros(8, 8);
    let mut terms = 0;
    for a in ops {
        for b in ops {
            for c in ops {
                let k = kron(&kron(a, b), c);
                let term = k.sandwich(rho);
                out = ComplexMatrix::from_fn(8, 8, |i, j| out[(i, j)] + term[(i, j)]);
                terms += 1;
            }
        }
    }
    assert_eq!(terms, ops.len().pow(3));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn completeness_and_trace(ch in channel(), rho in mixed_state(), pl in placement()) {
        prop_assert!(ch.completeness_defect() < 1e-12);
        let out = apply(&rho, &ch, pl);
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.matrix().hermiticity_defect() < 1e-12);
        prop_assert!(validate(out.matrix().clone()).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn first_qubit_channel_leaves_bc_alone(ch in channel(), rho in mixed_state()) {
        let out = apply(&rho, &ch, Placement::FirstQubit);
        let before = partial_trace(rho.matrix(), Subsystem::BC);
        prop_assert!(partial_trace(out.matrix(), Subsystem::BC).max_abs_diff(&before) < 1e-12);
    }

    #[test]
    fn sequential_all_qubits_matches_triple_sum(ch in channel(), rho in mixed_state()) {
        let fast = apply(&rho, &ch, Placement::AllQubits);
        prop_assert!(fast.matrix().max_abs_diff(&all_qubits_reference(rho.matrix(), &ch)) < 1e-12);
    }

    #[test]
    fn gadc_with_unit_p_is_adc(d in 0.0..=1.0f64, rho in mixed_state(), pl in placement()) {
        let a = apply(&rho, &adc(d).unwrap(), pl);
        let g = apply(&rho, &gadc(d, 1.0).unwrap(), pl);
        prop_assert!(a.matrix().max_abs_diff(g.matrix()) < 1e-14);
    }

    #[test]
    fn rank_two_images(a in 0.0..=1.0f64, d in 0.0..=1.0f64) {
        prop_assert!(rank(&apply(&gghz(a).unwrap().density(), &pdc(d).unwrap(), Placement::AllQubits)) <= 2);
        prop_assert!(rank(&apply(&w().density(), &adc(d).unwrap(), Placement::FirstQubit)) <= 2);
    }
}
