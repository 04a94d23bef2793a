// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Checks run by `verify`.

use memxfer::bounds::{
    bound_diag, bound_diagdiff, bound_offdiag, construct_diag_optimal, construct_diagdiff_optimal,
    construct_offdiag_optimal, transfer_residual, verify_ideal_theorems, PairKind, TheoremCheck,
};
use memxfer::channel::{isometry_residual, output_state_a, output_state_b, theta, ISOMETRY_TOL};
use memxfer::linalg::{frobenius_norm, hermitian_eigen, random_density_matrix, random_unitary};
use memxfer::memory::{full_report, memory_diag_diff, memory_fd_oracle, memory_offdiag};
use memxfer::optimizer::random_isometry;
use memxfer::{Complex64, StinespringTensor, TransferKind, TransferSpec};

use crate::error::CliError;

fn check(name: impl Into<String>, measured: f64, threshold: f64) -> TheoremCheck {
    TheoremCheck { name: name.into(), measured, threshold, passed: measured <= threshold }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Erasure theorems on the ideal-limit constructions.
pub fn theorems() -> Result<Vec<TheoremCheck>, CliError> {
    let one = real(1.0);
    let cases = [
        ("diagonal", construct_diag_optimal(1.0, 1.0)?, TransferSpec::diagonal(&[(1, 1.0), (2, 1.0)])?),
        ("offdiagonal n=2", construct_offdiag_optimal(2, one)?, TransferSpec::offdiagonal(2, 1, one)?),
        ("offdiagonal n=3", construct_offdiag_optimal(3, one)?, TransferSpec::offdiagonal(2, 1, one)?),
        ("offdiagonal (1,2)", construct_diagdiff_optimal(1.0)?, TransferSpec::offdiagonal(1, 2, one)?),
        (
            "diag-difference",
            construct_diagdiff_optimal(1.0)?,
            TransferSpec::pair(TransferKind::DiagDifference, 1, 2, one)?,
        ),
    ];
    let mut out = Vec::new();
    for (label, t, spec) in cases {
        let report = verify_ideal_theorems(&t, &spec, 1e-12)?;
        out.push(check(format!("{label}: ideal transfer residual"), report.transfer_residual, 1e-14));
        out.extend(report.checks.into_iter().map(|c| TheoremCheck { name: format!("{label}: {}", c.name), ..c }));
    }
    Ok(out)
}

/// Bound saturation by the three constructions.
pub fn saturation() -> Result<Vec<TheoremCheck>, CliError> {
    let mut out = Vec::new();
    let (e1, e2) = (0.3, 0.8);
    let t = construct_diag_optimal(e1, e2)?;
    let spec = TransferSpec::diagonal(&[(1, e1), (2, e2)])?;
    out.push(check("diag construction residual", transfer_residual(&t, &spec)?, 1e-14));
    let gap = (memory_offdiag(&t, 1, 2)? - bound_diag(e1, e2, PairKind::Cross)?).abs();
    out.push(check("diag construction saturates cross bound", gap, 1e-12));

    for eta in [real(0.3), Complex64::new(0.6, 0.3), real(0.95)] {
        let t = construct_offdiag_optimal(2, eta)?;
        let spec = TransferSpec::offdiagonal(2, 1, eta)?;
        out.push(check(format!("offdiag construction residual eta={eta}"), transfer_residual(&t, &spec)?, 1e-14));
        let gap = (memory_offdiag(&t, 1, 2)? - bound_offdiag(eta.norm())?).abs();
        out.push(check(format!("offdiag construction saturates bound eta={eta}"), gap, 1e-12));
    }

    let eps = 0.6;
    let t = construct_diagdiff_optimal(eps)?;
    let spec = TransferSpec::offdiagonal(1, 2, real(eps))?;
    out.push(check("diag-diff construction residual", transfer_residual(&t, &spec)?, 1e-14));
    let gap = (memory_diag_diff(&t, 1, 2)? - bound_diagdiff(eps)?).abs();
    out.push(check("diag-diff construction saturates bound", gap, 1e-12));
    out.push(check("diag-diff construction nullifies offdiag(1,2)", memory_offdiag(&t, 1, 2)?, 1e-12));
    Ok(out)
}

/// Worst-case invariant violations over `samples` random isometries.
pub fn invariants(samples: usize, seed: u64) -> Result<Vec<TheoremCheck>, CliError> {
    let mut trace = 0.0f64;
    let mut psd = 0.0f64;
    let mut pairing = 0.0f64;
    let mut theta_trace = 0.0f64;
    let mut memory = 0.0f64;
    let mut local = 0.0f64;
    let mut oracle = 0.0f64;
    for i in 0..samples as u64 {
        let s = seed.wrapping_add(i);
        let n = 2 + (i % 3) as usize;
        let dim_c = 1 + ((i / 3) % 3) as usize;
        let t = random_isometry(n, dim_c, s)?;
        let lambda = random_density_matrix(n, s)?;
        for out in [output_state_a(&t, &lambda)?, output_state_b(&t, &lambda)?] {
            trace = trace.max((out.matrix().trace() - real(1.0)).norm());
            let (values, _) = hermitian_eigen(out.matrix());
            psd = psd.max(-values[0]);
        }
        for p in 1..=n {
            for r in 1..=n {
                let pr = theta(&t, p, r)?.matrix;
                let rp = theta(&t, r, p)?.matrix;
                pairing = pairing.max(frobenius_norm(&(&pr - rp.adjoint())));
                let delta = if p == r { 1.0 } else { 0.0 };
                theta_trace = theta_trace.max((pr.trace() - real(delta)).norm());
            }
        }
        memory = memory.max(full_report(&t)?.max_entry());
        let moved = t.with_local_unitary(&random_unitary(n, s)?)?;
        let (a, c) = (1 + (i as usize % n), 1 + ((i as usize + 1) % n));
        local = local.max((memory_offdiag(&t, a, c)? - memory_offdiag(&moved, a, c)?).abs());
        oracle = oracle.max((memory_fd_oracle(&t, a, c, 1e-3)? - memory_offdiag(&t, a, c)?).abs());
    }
    Ok(vec![
        check("output trace", trace, 1e-10),
        check("output positivity (negated min eigenvalue)", psd, 1e-9),
        check("theta pairing", pairing, 1e-10),
        check("theta trace", theta_trace, 1e-10),
        check("memory cap", memory, 1.0 + 1e-9),
        check("local-unitary invariance", local, 1e-10),
        check("finite-difference oracle", oracle, 1e-8),
    ])
}

/// Checks a tensor file: isometry, and optionally the transfer and its
/// ideal-limit erasures.
pub fn tensor_file(t: &StinespringTensor, spec: Option<&TransferSpec>, tol: f64) -> Result<Vec<TheoremCheck>, CliError> {
    let iso = isometry_residual(t);
    let mut out = vec![check("tensor isometry residual", iso, tol)];
    let Some(spec) = spec else { return Ok(out) };
    if iso > ISOMETRY_TOL {
        return Ok(out);
    }
    out.push(check("tensor transfer residual", transfer_residual(t, spec)?, tol));
    let ideal = spec.elements().iter().all(|e| e.accuracy == real(1.0));
    if ideal && transfer_residual(t, spec)? <= tol {
        let report = verify_ideal_theorems(t, spec, tol)?;
        out.extend(report.checks.into_iter().map(|c| TheoremCheck { name: format!("tensor: {}", c.name), ..c }));
    }
    Ok(out)
}
