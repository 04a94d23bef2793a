// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Memory measures on the final state of A.
//!
//! Every measure is a Frobenius norm of a combination of memory operators,
//! normalized so the identity channel scores 1:
//!
//! | measure                      | formula                      |
//! |------------------------------|------------------------------|
//! | element `λ_ac`               | `‖Θ_ac‖`                     |
//! | `Re λ_ab`                    | `‖Θ_ab + Θ_ba‖ / √2`         |
//! | `Im λ_ab`                    | `‖Θ_ab − Θ_ba‖ / √2`         |
//! | `λ_aa − λ_bb`                | `‖Θ_aa − Θ_bb‖ / √2`         |

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{isometry_residual, output_state_a, theta0, StinespringTensor, ISOMETRY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, ComplexMatrix, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    RealPart,
    ImaginaryPart,
}

fn check_pair(t: &StinespringTensor, a: usize, c: usize) -> Result<()> {
    t.check_index(a)?;
    t.check_index(c)?;
    if a == c {
        return Err(Error::EqualIndices(a));
    }
    Ok(())
}

fn check_isometric(t: &StinespringTensor) -> Result<()> {
    let residual = isometry_residual(t);
    if residual > ISOMETRY_TOL {
        return Err(Error::NotIsometric { residual, tolerance: ISOMETRY_TOL });
    }
    Ok(())
}

/// `‖Θ_ac‖`, the memory of A on the element `λ_ac`, `a ≠ c`.
pub fn memory_offdiag(t: &StinespringTensor, a: usize, c: usize) -> Result<f64> {
    check_pair(t, a, c)?;
    check_isometric(t)?;
    Ok(offdiag0(t, a - 1, c - 1))
}

pub(crate) fn offdiag0(t: &StinespringTensor, a: usize, c: usize) -> f64 {
    frobenius_norm(&theta0(t, a, c))
}

/// Memory on the real or imaginary part of `λ_ab`.
pub fn memory_component(t: &StinespringTensor, a: usize, b: usize, kind: ComponentKind) -> Result<f64> {
    check_pair(t, a, b)?;
    check_isometric(t)?;
    Ok(component0(t, a - 1, b - 1, kind))
}

pub(crate) fn component0(t: &StinespringTensor, a: usize, b: usize, kind: ComponentKind) -> f64 {
    let ab = theta0(t, a, b);
    let ba = theta0(t, b, a);
    let combined = match kind {
        ComponentKind::RealPart => ab + ba,
        ComponentKind::ImaginaryPart => ab - ba,
    };
    FRAC_1_SQRT_2 * frobenius_norm(&combined)
}

/// `‖Θ_aa − Θ_bb‖ / √2`, the memory on `λ_aa − λ_bb`.
pub fn memory_diag_diff(t: &StinespringTensor, a: usize, b: usize) -> Result<f64> {
    check_pair(t, a, b)?;
    check_isometric(t)?;
    Ok(diag_diff0(t, a - 1, b - 1))
}

pub(crate) fn diag_diff0(t: &StinespringTensor, a: usize, b: usize) -> f64 {
    FRAC_1_SQRT_2 * frobenius_norm(&(theta0(t, a, a) - theta0(t, b, b)))
}

/// Finite-difference estimate of `‖Θ_ac‖` from the response of the final
/// state of A to perturbing `Re λ_ac` and `Im λ_ac` around `λ = I/N`.
///
/// Only [`output_state_a`] is used, never `Θ` itself. The map is linear,
/// so the difference quotient is exact up to roundoff.
pub fn memory_fd_oracle(t: &StinespringTensor, a: usize, c: usize, h: f64) -> Result<f64> {
    check_pair(t, a, c)?;
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::Precondition(format!("step h = {h} must lie in (0, 1e-3]")));
    }
    let n = t.n();
    let base = DensityMatrix::maximally_mixed(n)?;
    let base_out = output_state_a(t, &base)?;

    let mut delta_re = ComplexMatrix::zeros(n, n);
    delta_re[(a - 1, c - 1)] = Complex64::new(1.0, 0.0);
    delta_re[(c - 1, a - 1)] = Complex64::new(1.0, 0.0);
    let mut delta_im = ComplexMatrix::zeros(n, n);
    delta_im[(a - 1, c - 1)] = Complex64::new(0.0, 1.0);
    delta_im[(c - 1, a - 1)] = Complex64::new(0.0, -1.0);

    let response = |delta: ComplexMatrix| -> Result<f64> {
        let perturbed = DensityMatrix::new(base.matrix() + delta.scale(h))?;
        let out = output_state_a(t, &perturbed)?;
        Ok(frobenius_norm(&(out.matrix() - base_out.matrix())) / h)
    };
    let d_re = response(delta_re)?;
    let d_im = response(delta_im)?;
    Ok(0.5 * (d_re * d_re + d_im * d_im).sqrt())
}

/// All pairwise memories of a channel. Matrices are indexed 0-based;
/// diagonal entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryReport {
    pub n: usize,
    pub offdiag: Vec<Vec<f64>>,
    pub re_part: Vec<Vec<f64>>,
    pub im_part: Vec<Vec<f64>>,
    pub diag_diff: Vec<Vec<f64>>,
}

impl MemoryReport {
    /// Largest entry over every measure.
    pub fn max_entry(&self) -> f64 {
        [&self.offdiag, &self.re_part, &self.im_part, &self.diag_diff]
            .iter()
            .flat_map(|m| m.iter().flatten())
            .fold(0.0, |acc, &x| acc.max(x))
    }
}

pub fn full_report(t: &StinespringTensor) -> Result<MemoryReport> {
    check_isometric(t)?;
    let n = t.n();
    let fill = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|a| (0..n).map(|c| if a == c { 0.0 } else { f(a, c) }).collect()).collect()
    };
    Ok(MemoryReport {
        n,
        offdiag: fill(&|a, c| offdiag0(t, a, c)),
        re_part: fill(&|a, c| component0(t, a, c, ComponentKind::RealPart)),
        im_part: fill(&|a, c| component0(t, a, c, ComponentKind::ImaginaryPart)),
        diag_diff: fill(&|a, c| diag_diff0(t, a, c)),
    })
}
