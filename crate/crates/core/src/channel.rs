// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! The channel from A to B+C, stored as its action on `|p> ⊗ |1̄> ⊗ |c>`:
//!
//! ```text
//! U |p>|1̄>|c> = Σ_{k,l} |k>|l̄>|C^p_{kl}>
//! ```
//!
//! Public indices `p, k, l` are 1-based; storage is 0-based.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};

/// Isometry residual below which final states are computed.
pub const ISOMETRY_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The family of ancilla vectors `C^p_{kl}`, `p, k, l ∈ 1..=n`, each of
/// length `dim_c`.
///
/// Entries are stored in `(p, k, l, c)`-major order, `c` fastest. Read as a
/// column-major matrix this is the `n²·dim_c × n` isometry whose column `p`
/// is `|ψ_p>` with row index `(k, l, c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorDocument", into = "TensorDocument")]
pub struct StinespringTensor {
    n: usize,
    dim_c: usize,
    data: Vec<Complex64>,
}

/// JSON layout: `vectors` is a flat list of `[re, im]` pairs, index
/// `((p·n + k)·n + l)·dim_c + c` with 0-based `p, k, l, c`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDocument {
    n: usize,
    dim_c: usize,
    vectors: Vec<[f64; 2]>,
}

impl TryFrom<TensorDocument> for StinespringTensor {
    type Error = Error;

    fn try_from(doc: TensorDocument) -> Result<Self> {
        let data = doc.vectors.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        Self::from_data(doc.n, doc.dim_c, data)
    }
}

impl From<StinespringTensor> for TensorDocument {
    fn from(t: StinespringTensor) -> Self {
        TensorDocument {
            n: t.n,
            dim_c: t.dim_c,
            vectors: t.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl StinespringTensor {
    pub fn zeros(n: usize, dim_c: usize) -> Result<Self> {
        check_dims(n, dim_c)?;
        Ok(Self { n, dim_c, data: vec![ZERO; n * n * n * dim_c] })
    }

    pub fn from_data(n: usize, dim_c: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dims(n, dim_c)?;
        let expected = n * n * n * dim_c;
        if data.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: data.len() });
        }
        Ok(Self { n, dim_c, data })
    }

    /// Builds the tensor from an `n²·dim_c × n` matrix whose columns are
    /// the `|ψ_p>`.
    pub fn from_isometry(n: usize, dim_c: usize, v: &ComplexMatrix) -> Result<Self> {
        check_dims(n, dim_c)?;
        let rows = n * n * dim_c;
        if v.nrows() != rows || v.ncols() != n {
            return Err(Error::DimensionMismatch { expected: rows * n, found: v.nrows() * v.ncols() });
        }
        Ok(Self { n, dim_c, data: v.as_slice().to_vec() })
    }

    /// The `n²·dim_c × n` isometry matrix.
    pub fn isometry(&self) -> ComplexMatrix {
        ComplexMatrix::from_column_slice(self.composite_dim(), self.n, &self.data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_c(&self) -> usize {
        self.dim_c
    }

    /// `n²·dim_c`, the dimension of A⊗B⊗C.
    pub fn composite_dim(&self) -> usize {
        self.n * self.n * self.dim_c
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    fn offset(&self, p: usize, k: usize, l: usize) -> usize {
        ((p * self.n + k) * self.n + l) * self.dim_c
    }

    /// `|C^p_{kl}>` with 0-based indices.
    #[inline]
    pub(crate) fn vec0(&self, p: usize, k: usize, l: usize) -> &[Complex64] {
        let o = self.offset(p, k, l);
        &self.data[o..o + self.dim_c]
    }

    /// `|C^p_{kl}>` with 1-based indices.
    pub fn vector(&self, p: usize, k: usize, l: usize) -> Result<&[Complex64]> {
        for i in [p, k, l] {
            self.check_index(i)?;
        }
        Ok(self.vec0(p - 1, k - 1, l - 1))
    }

    /// Sets component `c` of `|C^p_{kl}>` (all indices 1-based).
    pub fn set(&mut self, p: usize, k: usize, l: usize, c: usize, value: Complex64) -> Result<()> {
        for i in [p, k, l] {
            self.check_index(i)?;
        }
        if c == 0 || c > self.dim_c {
            return Err(Error::IndexOutOfRange { index: c, max: self.dim_c });
        }
        let o = self.offset(p - 1, k - 1, l - 1) + c - 1;
        self.data[o] = value;
        Ok(())
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, max: self.n })
        } else {
            Ok(())
        }
    }

    /// Same channel with a larger ancilla; the extra components are zero.
    pub fn embed_ancilla(&self, dim_c: usize) -> Result<Self> {
        if dim_c < self.dim_c {
            return Err(Error::DimensionMismatch { expected: self.dim_c, found: dim_c });
        }
        let mut out = Self::zeros(self.n, dim_c)?;
        for p in 0..self.n {
            for k in 0..self.n {
                for l in 0..self.n {
                    let src = self.offset(p, k, l);
                    let dst = out.offset(p, k, l);
                    out.data[dst..dst + self.dim_c].copy_from_slice(&self.data[src..src + self.dim_c]);
                }
            }
        }
        Ok(out)
    }

    /// Follows the channel by a unitary `w` acting on A:
    /// `C^p_{kl} → Σ_{k'} w_{kk'} C^p_{k'l}`, so that `Θ_pr → w Θ_pr w†`.
    pub fn with_local_unitary(&self, w: &ComplexMatrix) -> Result<Self> {
        if w.nrows() != self.n || w.ncols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: w.nrows() });
        }
        let mut out = Self::zeros(self.n, self.dim_c)?;
        for p in 0..self.n {
            for k in 0..self.n {
                for l in 0..self.n {
                    let dst = out.offset(p, k, l);
                    for kp in 0..self.n {
                        let coeff = w[(k, kp)];
                        if coeff == ZERO {
                            continue;
                        }
                        let src = self.offset(p, kp, l);
                        for c in 0..self.dim_c {
                            out.data[dst + c] += coeff * self.data[src + c];
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Compact JSON document (see the type docs for the layout).
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_dims(n: usize, dim_c: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    if dim_c == 0 {
        return Err(Error::InvalidDimension(dim_c));
    }
    Ok(())
}

#[inline]
fn inner(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter().zip(ket).map(|(x, y)| x.conj() * y).sum()
}

/// Identity channel: `C^p_{kl} = δ_{kp} δ_{l1} e_1`.
pub fn identity_tensor(n: usize, dim_c: usize) -> Result<StinespringTensor> {
    let mut t = StinespringTensor::zeros(n, dim_c)?;
    for p in 0..n {
        let o = t.offset(p, p, 0);
        t.data[o] = ONE;
    }
    Ok(t)
}

/// Swap channel: `C^p_{kl} = δ_{k1} δ_{lp} e_1`; A is reset to `|1>`.
pub fn swap_tensor(n: usize, dim_c: usize) -> Result<StinespringTensor> {
    let mut t = StinespringTensor::zeros(n, dim_c)?;
    for p in 0..n {
        let o = t.offset(p, 0, p);
        t.data[o] = ONE;
    }
    Ok(t)
}

/// `max_{p,r} |Σ_{k,l} <C^r_{kl}|C^p_{kl}> − δ_pr|`.
pub fn isometry_residual(t: &StinespringTensor) -> f64 {
    let v = t.isometry();
    let gram = v.adjoint() * &v;
    let n = t.n();
    let mut worst = 0.0f64;
    for r in 0..n {
        for p in 0..n {
            let target = if p == r { ONE } else { ZERO };
            worst = worst.max((gram[(r, p)] - target).norm());
        }
    }
    worst
}

/// The coefficient `Θ_pr` of `λ_pr` in the final state of A.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryOperator {
    pub matrix: ComplexMatrix,
    /// 1-based `(p, r)`.
    pub indices: (usize, usize),
}

/// `Θ_pr` with 0-based indices: entry `(k, m)` is `Σ_l <C^r_{ml}|C^p_{kl}>`.
pub(crate) fn theta0(t: &StinespringTensor, p: usize, r: usize) -> ComplexMatrix {
    let n = t.n();
    ComplexMatrix::from_fn(n, n, |k, m| (0..n).map(|l| inner(t.vec0(r, m, l), t.vec0(p, k, l))).sum())
}

/// `Θ_pr` (1-based `p, r`).
pub fn theta(t: &StinespringTensor, p: usize, r: usize) -> Result<MemoryOperator> {
    t.check_index(p)?;
    t.check_index(r)?;
    Ok(MemoryOperator { matrix: theta0(t, p - 1, r - 1), indices: (p, r) })
}

/// Coefficients of the initial elements in `r̃_ab` (1-based `a, b`): entry
/// `(p, r)` (0-based) is `Σ_k <C^r_{kb}|C^p_{ka}>`, so that
/// `r̃_ab = Σ_pr λ_pr X[(p, r)]`.
pub fn transfer_coefficients(t: &StinespringTensor, a: usize, b: usize) -> Result<ComplexMatrix> {
    t.check_index(a)?;
    t.check_index(b)?;
    Ok(transfer_coefficients0(t, a - 1, b - 1))
}

pub(crate) fn transfer_coefficients0(t: &StinespringTensor, a: usize, b: usize) -> ComplexMatrix {
    let n = t.n();
    ComplexMatrix::from_fn(n, n, |p, r| (0..n).map(|k| inner(t.vec0(r, k, b), t.vec0(p, k, a))).sum())
}

fn check_state_inputs(t: &StinespringTensor, lambda: &DensityMatrix) -> Result<f64> {
    if lambda.dim() != t.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), found: lambda.dim() });
    }
    let residual = isometry_residual(t);
    if residual > ISOMETRY_TOL {
        return Err(Error::NotIsometric { residual, tolerance: ISOMETRY_TOL });
    }
    Ok(residual)
}

/// `V λ V†` on A⊗B⊗C.
fn joint_state(t: &StinespringTensor, lambda: &DensityMatrix) -> ComplexMatrix {
    let v = t.isometry();
    &v * lambda.matrix() * v.adjoint()
}

fn output_slack(t: &StinespringTensor, residual: f64) -> f64 {
    // tr Θ_pr deviates from δ_pr by at most the isometry residual.
    4.0 * t.n() as f64 * residual
}

/// Final state of A: `λ̃ = Σ_pr λ_pr Θ_pr`, i.e. the partial trace of the
/// joint state over B and C.
pub fn output_state_a(t: &StinespringTensor, lambda: &DensityMatrix) -> Result<DensityMatrix> {
    let residual = check_state_inputs(t, lambda)?;
    let joint = joint_state(t, lambda);
    let (n, dc) = (t.n(), t.dim_c());
    let row = |k: usize, l: usize, c: usize| (k * n + l) * dc + c;
    let out = ComplexMatrix::from_fn(n, n, |k, m| {
        let mut acc = ZERO;
        for l in 0..n {
            for c in 0..dc {
                acc += joint[(row(k, l, c), row(m, l, c))];
            }
        }
        acc
    });
    DensityMatrix::with_slack(out, output_slack(t, residual))
}

/// Final state of B: `r̃_ab = Σ_pr λ_pr Σ_k <C^r_{kb}|C^p_{ka}>`.
pub fn output_state_b(t: &StinespringTensor, lambda: &DensityMatrix) -> Result<DensityMatrix> {
    let residual = check_state_inputs(t, lambda)?;
    let joint = joint_state(t, lambda);
    let (n, dc) = (t.n(), t.dim_c());
    let row = |k: usize, l: usize, c: usize| (k * n + l) * dc + c;
    let out = ComplexMatrix::from_fn(n, n, |a, b| {
        let mut acc = ZERO;
        for k in 0..n {
            for c in 0..dc {
                acc += joint[(row(k, a, c), row(k, b, c))];
            }
        }
        acc
    });
    DensityMatrix::with_slack(out, output_slack(t, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, random_density_matrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_tensors_are_isometries() {
        assert_eq!(isometry_residual(&identity_tensor(3, 1).unwrap()), 0.0);
        assert_eq!(isometry_residual(&identity_tensor(3, 2).unwrap()), 0.0);
        assert_eq!(isometry_residual(&swap_tensor(3, 2).unwrap()), 0.0);
        assert_eq!(isometry_residual(&StinespringTensor::zeros(2, 1).unwrap()), 1.0);
    }

    #[test]
    fn theta_of_identity_is_a_matrix_unit() {
        let t = identity_tensor(3, 1).unwrap();
        let th = theta(&t, 1, 2).unwrap();
        let mut expected = ComplexMatrix::zeros(3, 3);
        expected[(0, 1)] = ONE;
        assert_eq!(th.matrix, expected);
        assert_eq!(th.indices, (1, 2));
        assert!(matches!(theta(&t, 0, 1), Err(Error::IndexOutOfRange { index: 0, max: 3 })));
        assert!(matches!(theta(&t, 1, 4), Err(Error::IndexOutOfRange { index: 4, max: 3 })));
    }

    #[test]
    fn identity_and_swap_outputs() {
        for n in 1..=3 {
            let lambda = random_density_matrix(n, 5).unwrap();
            let id = identity_tensor(n, 1).unwrap();
            let sw = swap_tensor(n, 1).unwrap();
            let ground = DensityMatrix::basis_state(n, 1).unwrap();

            let a = output_state_a(&id, &lambda).unwrap();
            assert!(frobenius_norm(&(a.matrix() - lambda.matrix())) < 1e-14);
            let b = output_state_b(&id, &lambda).unwrap();
            assert!(frobenius_norm(&(b.matrix() - ground.matrix())) < 1e-14);

            let a = output_state_a(&sw, &lambda).unwrap();
            assert!(frobenius_norm(&(a.matrix() - ground.matrix())) < 1e-14);
            let b = output_state_b(&sw, &lambda).unwrap();
            assert!(frobenius_norm(&(b.matrix() - lambda.matrix())) < 1e-14);
        }
    }

    #[test]
    fn state_computation_rejects_bad_inputs() {
        let lambda = random_density_matrix(2, 1).unwrap();
        let zeros = StinespringTensor::zeros(2, 1).unwrap();
        assert!(matches!(output_state_a(&zeros, &lambda), Err(Error::NotIsometric { .. })));
        assert!(matches!(output_state_b(&zeros, &lambda), Err(Error::NotIsometric { .. })));
        let id3 = identity_tensor(3, 1).unwrap();
        assert!(matches!(
            output_state_a(&id3, &lambda),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn partial_trace_matches_theta_expansion() {
        let mut t = StinespringTensor::zeros(2, 1).unwrap();
        // Hadamard-like mixing between |1>|1̄> and |2>|2̄>.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        t.set(1, 1, 1, 1, c(s, 0.)).unwrap();
        t.set(1, 2, 2, 1, c(s, 0.)).unwrap();
        t.set(2, 1, 1, 1, c(0., s)).unwrap();
        t.set(2, 2, 2, 1, c(0., -s)).unwrap();
        assert!(isometry_residual(&t) < 1e-15);
        let lambda = random_density_matrix(2, 9).unwrap();
        let direct = output_state_a(&t, &lambda).unwrap();
        let mut expanded = ComplexMatrix::zeros(2, 2);
        for p in 1..=2 {
            for r in 1..=2 {
                expanded += theta(&t, p, r).unwrap().matrix * lambda.element(p, r);
            }
        }
        assert!(frobenius_norm(&(direct.matrix() - expanded)) < 1e-14);

        let b = output_state_b(&t, &lambda).unwrap();
        for (a, bb) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let x = transfer_coefficients(&t, a, bb).unwrap();
            let mut acc = ZERO;
            for p in 0..2 {
                for r in 0..2 {
                    acc += x[(p, r)] * lambda.matrix()[(p, r)];
                }
            }
            assert!((acc - b.element(a, bb)).norm() < 1e-14);
        }
    }

    #[test]
    fn json_layout_is_documented_order() {
        let mut t = StinespringTensor::zeros(2, 2).unwrap();
        // p=2, k=1, l=2, c=1 → ((1·2 + 0)·2 + 1)·2 + 0 = 10
        t.set(2, 1, 2, 1, c(0.25, -1.5)).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(doc["n"], 2);
        assert_eq!(doc["dim_c"], 2);
        let vectors = doc["vectors"].as_array().unwrap();
        assert_eq!(vectors.len(), 16);
        assert_eq!(vectors[10], serde_json::json!([0.25, -1.5]));
    }

    #[test]
    fn json_rejects_wrong_length_and_unknown_fields() {
        assert!(StinespringTensor::from_json(r#"{"n":1,"dim_c":1,"vectors":[]}"#).is_err());
        assert!(StinespringTensor::from_json(r#"{"n":1,"dim_c":1,"vectors":[[1,0]],"x":1}"#).is_err());
        let t = StinespringTensor::from_json(r#"{"n":1,"dim_c":1,"vectors":[[1,0]]}"#).unwrap();
        assert_eq!(isometry_residual(&t), 0.0);
    }

    #[test]
    fn embed_ancilla_preserves_channel() {
        let t = swap_tensor(2, 1).unwrap();
        let big = t.embed_ancilla(3).unwrap();
        assert_eq!(big.dim_c(), 3);
        assert_eq!(isometry_residual(&big), 0.0);
        let lambda = random_density_matrix(2, 4).unwrap();
        let b = output_state_b(&big, &lambda).unwrap();
        assert!(frobenius_norm(&(b.matrix() - lambda.matrix())) < 1e-14);
        assert!(t.embed_ancilla(0).is_err());
    }
}
