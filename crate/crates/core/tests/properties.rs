// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

use memxfer::channel::{output_state_a, output_state_b, theta};
use memxfer::linalg::{frobenius_norm, hermitian_eigen, random_density_matrix, random_unitary};
use memxfer::memory::{full_report, memory_component, memory_diag_diff, memory_fd_oracle, memory_offdiag};
use memxfer::optimizer::random_isometry;
use memxfer::{Complex64, ComplexMatrix, ComponentKind, DensityMatrix, StinespringTensor, TransferSpec};
use proptest::prelude::*;

fn tensor() -> impl Strategy<Value = StinespringTensor> {
    (2usize..=4, 1usize..=3, any::<u64>()).prop_map(|(n, dc, seed)| random_isometry(n, dc, seed).unwrap())
}

fn pair(n: usize, i: usize, j: usize) -> (usize, usize) {
    let a = i % n + 1;
    let c = (a + j % (n - 1)) % n + 1;
    (a, c)
}

/// Independent oracle for the final states: coefficient-wise expansion of
/// `V λ V†` without partial traces.
fn naive_outputs(t: &StinespringTensor, lambda: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (n, dc) = (t.n(), t.dim_c());
    let amp = |p: usize, k: usize, l: usize, c: usize| t.vector(p + 1, k + 1, l + 1).unwrap()[c];
    let mut a = ComplexMatrix::zeros(n, n);
    let mut b = ComplexMatrix::zeros(n, n);
    for p in 0..n {
        for r in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for s in 0..n {
                        for c in 0..dc {
                            a[(x, y)] += lambda[(p, r)] * amp(p, x, s, c) * amp(r, y, s, c).conj();
                            b[(x, y)] += lambda[(p, r)] * amp(p, s, x, c) * amp(r, s, y, c).conj();
                        }
                    }
                }
            }
        }
    }
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_are_states(t in tensor(), seed in any::<u64>()) {
        let lambda = random_density_matrix(t.n(), seed).unwrap();
        for out in [output_state_a(&t, &lambda).unwrap(), output_state_b(&t, &lambda).unwrap()] {
            let m = out.matrix();
            prop_assert!((m.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
            let (values, _) = hermitian_eigen(m);
            prop_assert!(values[0] >= -1e-9);
        }
    }

    #[test]
    fn outputs_match_expansion(t in tensor(), seed in any::<u64>()) {
        let lambda = random_density_matrix(t.n(), seed).unwrap();
        let (a, b) = naive_outputs(&t, lambda.matrix());
        prop_assert!(frobenius_norm(&(output_state_a(&t, &lambda).unwrap().into_matrix() - a)) <= 1e-12);
        prop_assert!(frobenius_norm(&(output_state_b(&t, &lambda).unwrap().into_matrix() - b)) <= 1e-12);
    }

    #[test]
    fn outputs_are_linear(t in tensor(), s1 in any::<u64>(), s2 in any::<u64>(), w in 0.0f64..1.0) {
        let l1 = random_density_matrix(t.n(), s1).unwrap();
        let l2 = random_density_matrix(t.n(), s2).unwrap();
        let mix = DensityMatrix::new(l1.matrix().scale(w) + l2.matrix().scale(1.0 - w)).unwrap();
        let lhs = output_state_a(&t, &mix).unwrap().into_matrix();
        let rhs = output_state_a(&t, &l1).unwrap().into_matrix().scale(w)
            + output_state_a(&t, &l2).unwrap().into_matrix().scale(1.0 - w);
        prop_assert!(frobenius_norm(&(lhs - rhs)) <= 1e-12);
    }

    #[test]
    fn theta_pairing_and_trace(t in tensor()) {
        let n = t.n();
        for p in 1..=n {
            for r in 1..=n {
                let pr = theta(&t, p, r).unwrap().matrix;
                let rp = theta(&t, r, p).unwrap().matrix;
                prop_assert!(frobenius_norm(&(&pr - rp.adjoint())) <= 1e-10);
                let expected = if p == r { 1.0 } else { 0.0 };
                prop_assert!((pr.trace() - Complex64::new(expected, 0.0)).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn memories_never_exceed_one(t in tensor()) {
        let report = full_report(&t).unwrap();
        prop_assert!(report.max_entry() <= 1.0 + 1e-9);
        for a in 0..t.n() {
            prop_assert_eq!(report.diag_diff[a][a], 0.0);
            for c in 0..t.n() {
                prop_assert!((report.offdiag[a][c] - report.offdiag[c][a]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn local_unitary_invariance(t in tensor(), seed in any::<u64>(), i in 0usize..16, j in 0usize..16) {
        let (a, c) = pair(t.n(), i, j);
        let w = random_unitary(t.n(), seed).unwrap();
        let moved = t.with_local_unitary(&w).unwrap();
        prop_assert!((memory_offdiag(&t, a, c).unwrap() - memory_offdiag(&moved, a, c).unwrap()).abs() <= 1e-10);
        prop_assert!((memory_diag_diff(&t, a, c).unwrap() - memory_diag_diff(&moved, a, c).unwrap()).abs() <= 1e-10);
        for kind in [ComponentKind::RealPart, ComponentKind::ImaginaryPart] {
            let before = memory_component(&t, a, c, kind).unwrap();
            prop_assert!((before - memory_component(&moved, a, c, kind).unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn oracle_matches_closed_form(t in tensor(), i in 0usize..16, j in 0usize..16) {
        let (a, c) = pair(t.n(), i, j);
        let oracle = memory_fd_oracle(&t, a, c, 1e-3).unwrap();
        prop_assert!((oracle - memory_offdiag(&t, a, c).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn tensor_json_round_trip_is_exact(t in tensor()) {
        let back = StinespringTensor::from_json(&t.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn spec_json_round_trip(a in 1usize..5, b in 1usize..5, re in 0.05f64..0.7, im in -0.7f64..0.7) {
        prop_assume!(a != b);
        let spec = TransferSpec::offdiagonal(a, b, Complex64::new(re, im)).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<TransferSpec>(&text).unwrap(), spec);
    }
}

#[test]
fn memory_is_unchanged_by_embedding_in_a_larger_ancilla() {
    let t = random_isometry(3, 1, 5).unwrap();
    let big = t.embed_ancilla(4).unwrap();
    assert_eq!(full_report(&t).unwrap(), full_report(&big).unwrap());
}
