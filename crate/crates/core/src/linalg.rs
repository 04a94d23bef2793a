// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra shared by the rest of the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column-major dense complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Euclidean (Frobenius) norm `sqrt(tr(m m†))`.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`. Eigenvalues are sorted
/// ascending, eigenvectors are the matching columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (DVector<f64>, ComplexMatrix) {
    assert!(m.is_square(), "hermitian_eigen requires a square matrix");
    let eig = hermitian_part(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Rebuild `Σ f(w_i) v_i v_i†` from an eigen-decomposition.
pub(crate) fn spectral_map(
    values: &DVector<f64>,
    vectors: &ComplexMatrix,
    f: impl Fn(f64) -> Complex64,
) -> ComplexMatrix {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (j, &w) in values.iter().enumerate() {
        let fw = f(w);
        for i in 0..n {
            scaled[(i, j)] *= fw;
        }
    }
    scaled * vectors.adjoint()
}

/// Square root of a positive semidefinite matrix; negative eigenvalues from
/// roundoff are clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(m);
    spectral_map(&values, &vectors, |w| Complex64::new(w.max(0.0).sqrt(), 0.0))
}

/// `exp(i h)` for Hermitian `h`.
pub fn unitary_exp(h: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(h);
    spectral_map(&values, &vectors, |w| Complex64::from_polar(1.0, w))
}

pub(crate) fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn ginibre<R: rand::Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    // Filled row by row so the sample is independent of storage order.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = complex_gaussian(rng);
        }
    }
    m
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase of `R`'s
/// diagonal divided out).
pub fn random_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, n, &mut rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant at the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_slack(matrix, 0.0)
    }

    /// Like [`DensityMatrix::new`], with `slack` added to the Hermiticity
    /// and trace tolerances. Used for channel outputs of approximately
    /// isometric tensors.
    pub fn with_slack(matrix: ComplexMatrix, slack: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotDensityMatrix(format!(
                "matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let herm_tol = HERMITIAN_TOL + slack;
        for i in 0..n {
            for j in 0..n {
                let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if dev > herm_tol {
                    return Err(Error::NotDensityMatrix(format!(
                        "not Hermitian at ({}, {}): deviation {dev:e}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL + slack {
            return Err(Error::NotDensityMatrix(format!("trace {trace} != 1")));
        }
        let (values, _) = hermitian_eigen(&matrix);
        let min = values[0];
        if min < -PSD_TOL - slack {
            return Err(Error::NotDensityMatrix(format!("smallest eigenvalue {min:e}")));
        }
        for a in 0..n {
            for c in 0..n {
                let bound = matrix[(a, a)].re * matrix[(c, c)].re + PSD_TOL + slack;
                if matrix[(a, c)].norm_sqr() > bound {
                    return Err(Error::NotDensityMatrix(format!(
                        "|rho_{}{}|^2 exceeds rho_aa * rho_cc",
                        a + 1,
                        c + 1
                    )));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// The pure state `|index><index|` (1-based index).
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, max: n });
        }
        let mut m = ComplexMatrix::zeros(n, n);
        m[(index - 1, index - 1)] = Complex64::new(1.0, 0.0);
        Ok(Self { matrix: m })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let m = ComplexMatrix::identity(n, n).scale(1.0 / n as f64);
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Element `λ_ac` with 1-based indices.
    pub fn element(&self, a: usize, c: usize) -> Complex64 {
        self.matrix[(a - 1, c - 1)]
    }

    /// `V ρ V†`.
    pub fn conjugated(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: unitary.nrows() });
        }
        Self::new(unitary * &self.matrix * unitary.adjoint())
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(rho: DensityMatrix) -> Self {
        rho.matrix
    }
}

/// Random full-rank state `G G† / tr(G G†)` with `G` complex Ginibre.
pub fn random_density_matrix(n: usize, seed: u64) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, n, &mut rng);
    let gg = &g * g.adjoint();
    let trace = gg.trace().re;
    DensityMatrix::new(hermitian_part(&gg).unscale(trace))
}

/// Uhlmann fidelity `(tr sqrt(ρ^{1/2} σ ρ^{1/2}))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let root = psd_sqrt(rho.matrix());
    let inner = &root * sigma.matrix() * &root;
    let (values, _) = hermitian_eigen(&inner);
    let trace: f64 = values.iter().map(|w| w.max(0.0).sqrt()).sum();
    Ok((trace * trace).clamp(0.0, 1.0))
}
