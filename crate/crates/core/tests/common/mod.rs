#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;

use tritangle::linalg::{kron, ComplexMatrix};
use tritangle::states::{validate, DensityMatrix, PureState};

pub fn c64() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(c64(), rows * cols).prop_map(move |v| ComplexMatrix::from_vec(rows, cols, v))
}

pub fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(|a| a.hermitian_part())
}

pub fn pure_state() -> impl Strategy<Value = PureState> {
    prop::collection::vec(c64(), 8)
        .prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::normalized(v.try_into().unwrap()).unwrap())
}

/// ρ = GG†/tr(GG†) with G of width 1..=8, so every rank occurs.
pub fn mixed_state() -> impl Strategy<Value = DensityMatrix> {
    (1usize..=8).prop_flat_map(|k| matrix(8, k)).prop_filter("nonzero", |g| g.frobenius_norm() > 1e-3).prop_map(|g| {
        let rho = g.matmul(&g.adjoint());
        let tr = rho.trace().re;
        validate(rho.scale_real(1.0 / tr).hermitian_part()).unwrap()
    })
}

pub fn su2() -> impl Strategy<Value = ComplexMatrix> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU)
        .prop_map(|(theta, phi, lambda, global)| {
            let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let e = |x: f64| Complex64::from_polar(1.0, x + global);
            ComplexMatrix::from_vec(2, 2, vec![e(0.0) * c, -e(lambda) * s, e(phi) * s, e(phi + lambda) * c])
        })
}

pub fn local_unitary() -> impl Strategy<Value = ComplexMatrix> {
    (su2(), su2(), su2()).prop_map(|(a, b, c)| kron(&kron(&a, &b), &c))
}

pub fn apply_unitary(u: &ComplexMatrix, psi: &PureState) -> PureState {
    PureState::normalized(u.apply(psi.amplitudes()).try_into().unwrap()).unwrap()
}
