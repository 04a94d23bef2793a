// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

use approx::assert_abs_diff_eq;
use memxfer::bounds::{
    bound_diag, bound_diagdiff, bound_offdiag, construct_diag_optimal, construct_diagdiff_optimal,
    construct_offdiag_optimal, transfer_residual, verify_ideal_theorems, PairKind,
};
use memxfer::channel::{isometry_residual, output_state_a, output_state_b, StinespringTensor};
use memxfer::linalg::random_density_matrix;
use memxfer::memory::{memory_component, memory_diag_diff, memory_offdiag};
use memxfer::{Complex64, ComplexMatrix, ComponentKind, TransferKind, TransferSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn diag_construction_saturates_cross_bound() {
    for (e1, e2) in [(0.3, 0.8), (0.05, 0.5), (0.9, 0.9), (1.0, 0.4)] {
        let t = construct_diag_optimal(e1, e2).unwrap();
        let spec = TransferSpec::diagonal(&[(1, e1), (2, e2)]).unwrap();
        assert!(transfer_residual(&t, &spec).unwrap() <= 1e-14);
        assert!(isometry_residual(&t) <= 1e-14);
        let expected = ((1.0 - e1) * (1.0 - e2)).sqrt();
        assert_abs_diff_eq!(memory_offdiag(&t, 1, 2).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(bound_diag(e1, e2, PairKind::Cross).unwrap(), expected, epsilon = 1e-15);
    }
}

#[test]
fn offdiag_construction_saturates_bound() {
    for eta in [c(0.3, 0.0), c(0.6, 0.3), c(0.0, 0.95), c(1.0, 0.0)] {
        for n in [2, 3, 4] {
            let t = construct_offdiag_optimal(n, eta).unwrap();
            let spec = TransferSpec::offdiagonal(2, 1, eta).unwrap();
            assert!(transfer_residual(&t, &spec).unwrap() <= 1e-14);
            let expected = (1.0 - eta.norm_sqr()).sqrt();
            assert_abs_diff_eq!(memory_offdiag(&t, 1, 2).unwrap(), expected, epsilon = 1e-12);
            assert_abs_diff_eq!(bound_offdiag(eta.norm()).unwrap(), expected, epsilon = 1e-15);
            assert_abs_diff_eq!(memory_diag_diff(&t, 1, 2).unwrap(), 1.0 - eta.norm_sqr(), epsilon = 1e-12);
        }
    }
}

#[test]
fn diagdiff_construction_saturates_bound_and_nullifies_offdiag() {
    for eps in [0.1, 0.6, 0.99, 1.0] {
        let t = construct_diagdiff_optimal(eps).unwrap();
        let spec = TransferSpec::offdiagonal(1, 2, c(eps, 0.0)).unwrap();
        assert!(transfer_residual(&t, &spec).unwrap() <= 1e-14);
        let expected = (1.0 - eps * eps).sqrt();
        assert_abs_diff_eq!(memory_diag_diff(&t, 1, 2).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(bound_diagdiff(eps).unwrap(), expected, epsilon = 1e-15);
        assert!(memory_offdiag(&t, 1, 2).unwrap() <= 1e-12);
    }
}

/// The closed-form final states of the two-level off-diagonal construction.
fn closed_form(lambda: &ComplexMatrix, eta: Complex64) -> (ComplexMatrix, ComplexMatrix) {
    let e2 = eta.norm_sqr();
    let s = (1.0 - e2).sqrt();
    let l = |i: usize, j: usize| lambda[(i, j)];
    let a = ComplexMatrix::from_row_slice(2, 2, &[l(0, 0) + l(1, 1) * e2, l(0, 1) * s, l(1, 0) * s, l(1, 1) * (1.0 - e2)]);
    let b = ComplexMatrix::from_row_slice(2, 2, &[l(0, 0) + l(1, 1) * (1.0 - e2), eta.conj() * l(0, 1), eta * l(1, 0), l(1, 1) * e2]);
    (a, b)
}

#[test]
fn offdiag_final_states_match_closed_form() {
    for eta in [c(0.3, 0.0), c(0.6, 0.3), c(0.95, 0.0)] {
        let t = construct_offdiag_optimal(2, eta).unwrap();
        for seed in 0..20 {
            let lambda = random_density_matrix(2, seed).unwrap();
            let (a, b) = closed_form(lambda.matrix(), eta);
            let out_a = output_state_a(&t, &lambda).unwrap();
            let out_b = output_state_b(&t, &lambda).unwrap();
            for (x, y) in out_a.matrix().iter().zip(a.iter()).chain(out_b.matrix().iter().zip(b.iter())) {
                assert!((x - y).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn ideal_diagonal_transfer_need_not_leave_a_diagonal() {
    let mut t = StinespringTensor::zeros(3, 1).unwrap();
    t.set(1, 1, 1, 1, c(1.0, 0.0)).unwrap();
    t.set(2, 2, 2, 1, c(1.0, 0.0)).unwrap();
    t.set(3, 3, 2, 1, c(1.0, 0.0)).unwrap();
    assert!(isometry_residual(&t) <= 1e-15);
    let spec = TransferSpec::diagonal(&[(1, 1.0)]).unwrap();
    let report = verify_ideal_theorems(&t, &spec, 1e-12).unwrap();
    assert!(report.passed());
    let lambda = random_density_matrix(3, 2).unwrap();
    let out = output_state_a(&t, &lambda).unwrap();
    assert!(out.element(2, 3).norm() > 1e-3);
    assert!((out.element(2, 3) - lambda.element(2, 3)).norm() <= 1e-14);
}

/// Copy of A's `σ_x` eigenbasis label into B.
fn sigma_x_copy() -> StinespringTensor {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [h, h];
    let minus = [h, -h];
    let mut t = StinespringTensor::zeros(2, 1).unwrap();
    for p in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                let amp: f64 = [plus, minus].iter().map(|s| s[p] * s[k] * s[l]).sum();
                t.set(p + 1, k + 1, l + 1, 1, c(amp, 0.0)).unwrap();
            }
        }
    }
    t
}

#[test]
fn ideal_real_part_transfer_erases_imaginary_and_diag_diff_memory() {
    let t = sigma_x_copy();
    assert!(isometry_residual(&t) <= 1e-15);
    let spec = TransferSpec::pair(TransferKind::RealPart, 1, 2, c(1.0, 0.0)).unwrap();
    assert!(transfer_residual(&t, &spec).unwrap() <= 1e-15);
    let report = verify_ideal_theorems(&t, &spec, 1e-12).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(memory_component(&t, 1, 2, ComponentKind::ImaginaryPart).unwrap() <= 1e-12);
    assert!(memory_diag_diff(&t, 1, 2).unwrap() <= 1e-12);
    assert_abs_diff_eq!(memory_component(&t, 1, 2, ComponentKind::RealPart).unwrap(), 1.0, epsilon = 1e-12);
    let lambda = random_density_matrix(2, 9).unwrap();
    let out = output_state_b(&t, &lambda).unwrap();
    assert_abs_diff_eq!(out.element(1, 2).re, lambda.element(1, 2).re, epsilon = 1e-14);
}

#[test]
fn ideal_constructions_pass_theorem_checks() {
    let cases = [
        (construct_diag_optimal(1.0, 1.0).unwrap(), TransferSpec::diagonal(&[(1, 1.0), (2, 1.0)]).unwrap()),
        (construct_offdiag_optimal(2, c(1.0, 0.0)).unwrap(), TransferSpec::offdiagonal(2, 1, c(1.0, 0.0)).unwrap()),
        (construct_offdiag_optimal(3, c(1.0, 0.0)).unwrap(), TransferSpec::offdiagonal(2, 1, c(1.0, 0.0)).unwrap()),
        (construct_diagdiff_optimal(1.0).unwrap(), TransferSpec::pair(TransferKind::DiagDifference, 1, 2, c(1.0, 0.0)).unwrap()),
        (construct_diagdiff_optimal(1.0).unwrap(), TransferSpec::offdiagonal(1, 2, c(1.0, 0.0)).unwrap()),
    ];
    for (t, spec) in &cases {
        let report = verify_ideal_theorems(t, spec, 1e-12).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.checks.iter().all(|c| c.measured <= 1e-12));
    }
}

#[test]
fn non_ideal_construction_fails_the_precondition() {
    let t = construct_offdiag_optimal(2, c(0.6, 0.0)).unwrap();
    let spec = TransferSpec::offdiagonal(2, 1, c(0.6, 0.0)).unwrap();
    assert!(verify_ideal_theorems(&t, &spec, 1e-8).is_err());
}
