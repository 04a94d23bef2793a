// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Sums of squared sesquilinear forms in the isometry `V` and their
//! Wirtinger gradients.
//!
//! Every memory operator entry and every transfer coefficient is a form
//! `z(V) = Σ_t w_t conj(V[x_t, r_t]) V[y_t, p_t]`. Gradients follow the
//! convention `df = 2 Re Σ conj(G) ∘ dV`.

use num_complex::Complex64;

use crate::bounds::TransferSpec;
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::memory::ComponentKind;

#[derive(Debug, Clone, Copy)]
struct Term {
    w: Complex64,
    x: usize,
    r: usize,
    y: usize,
    p: usize,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Form {
    terms: Vec<Term>,
}

impl Form {
    pub fn eval(&self, v: &ComplexMatrix) -> Complex64 {
        self.terms.iter().map(|t| t.w * v[(t.x, t.r)].conj() * v[(t.y, t.p)]).sum()
    }

    /// Adds the gradient of `2 Re(conj(e) z)` to `g`, so that `e = z − τ`
    /// gives the gradient of `|z − τ|²`.
    pub fn add_gradient(&self, v: &ComplexMatrix, e: Complex64, g: &mut ComplexMatrix) {
        for t in &self.terms {
            g[(t.y, t.p)] += e * t.w.conj() * v[(t.x, t.r)];
            g[(t.x, t.r)] += e.conj() * t.w * v[(t.y, t.p)];
        }
    }

    fn extend_scaled(&mut self, other: &Form, scale: Complex64) {
        self.terms.extend(other.terms.iter().map(|t| Term { w: t.w * scale, ..*t }));
    }
}

/// `scale · Σ_q |z_q − τ_q|²`.
#[derive(Debug, Clone)]
pub(crate) struct SquaredSum {
    forms: Vec<(Form, Complex64)>,
    scale: f64,
}

impl SquaredSum {
    pub fn value(&self, v: &ComplexMatrix) -> f64 {
        self.scale * self.forms.iter().map(|(f, tau)| (f.eval(v) - tau).norm_sqr()).sum::<f64>()
    }

    /// Adds `weight ·` (gradient of the sum) to `g`; returns the value.
    pub fn add_gradient(&self, v: &ComplexMatrix, weight: f64, g: &mut ComplexMatrix) -> f64 {
        let mut total = 0.0;
        for (f, tau) in &self.forms {
            let e = f.eval(v) - tau;
            total += e.norm_sqr();
            f.add_gradient(v, e * (weight * self.scale), g);
        }
        self.scale * total
    }

    /// `max_q |z_q − τ_q|`.
    pub fn max_deviation(&self, v: &ComplexMatrix) -> f64 {
        self.forms.iter().map(|(f, tau)| (f.eval(v) - tau).norm()).fold(0.0, f64::max)
    }

    /// Real and imaginary parts of every deviation, each with its gradient.
    pub fn linearize(&self, v: &ComplexMatrix) -> Vec<(f64, ComplexMatrix)> {
        let mut out = Vec::with_capacity(2 * self.forms.len());
        for (f, tau) in &self.forms {
            let e = f.eval(v) - tau;
            // Re z = Re(conj(1) z), Im z = Re(conj(i) z); halve the |.|² convention.
            for (value, dir) in [(e.re, Complex64::new(0.5, 0.0)), (e.im, Complex64::new(0.0, 0.5))] {
                let mut g = ComplexMatrix::zeros(v.nrows(), v.ncols());
                f.add_gradient(v, dir, &mut g);
                out.push((value, g));
            }
        }
        out
    }
}

/// Index helper for rows `(k, l, c)` of the isometry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    pub n: usize,
    pub dim_c: usize,
}

impl Layout {
    fn row(&self, k: usize, l: usize, c: usize) -> usize {
        (k * self.n + l) * self.dim_c + c
    }

    /// Entry `(k, m)` of `Θ_pr`: `Σ_{l,c} conj(C^r_{ml}[c]) C^p_{kl}[c]`.
    fn theta_entry(&self, p: usize, r: usize, k: usize, m: usize) -> Form {
        let mut terms = Vec::with_capacity(self.n * self.dim_c);
        for l in 0..self.n {
            for c in 0..self.dim_c {
                terms.push(Term { w: Complex64::new(1.0, 0.0), x: self.row(m, l, c), r, y: self.row(k, l, c), p });
            }
        }
        Form { terms }
    }

    /// Entry `(p, r)` of `X^{ab}`: `Σ_{k,c} conj(C^r_{kb}[c]) C^p_{ka}[c]`.
    fn transfer_entry(&self, a: usize, b: usize, p: usize, r: usize) -> Form {
        let mut terms = Vec::with_capacity(self.n * self.dim_c);
        for k in 0..self.n {
            for c in 0..self.dim_c {
                terms.push(Term { w: Complex64::new(1.0, 0.0), x: self.row(k, b, c), r, y: self.row(k, a, c), p });
            }
        }
        Form { terms }
    }

    /// `scale · ‖Σ_j s_j Θ_{p_j r_j}‖²`.
    fn theta_combination(&self, parts: &[(f64, usize, usize)], scale: f64) -> SquaredSum {
        let mut forms = Vec::with_capacity(self.n * self.n);
        for k in 0..self.n {
            for m in 0..self.n {
                let mut f = Form::default();
                for &(s, p, r) in parts {
                    f.extend_scaled(&self.theta_entry(p, r, k, m), Complex64::new(s, 0.0));
                }
                forms.push((f, Complex64::new(0.0, 0.0)));
            }
        }
        SquaredSum { forms, scale }
    }

    /// `‖Θ_ac‖²` (0-based).
    pub fn offdiag_sq(&self, a: usize, c: usize) -> SquaredSum {
        self.theta_combination(&[(1.0, a, c)], 1.0)
    }

    /// `‖Θ_aa − Θ_bb‖² / 2`.
    pub fn diag_diff_sq(&self, a: usize, b: usize) -> SquaredSum {
        self.theta_combination(&[(1.0, a, a), (-1.0, b, b)], 0.5)
    }

    /// `‖Θ_ab ± Θ_ba‖² / 2`.
    pub fn component_sq(&self, a: usize, b: usize, kind: ComponentKind) -> SquaredSum {
        let s = match kind {
            ComponentKind::RealPart => 1.0,
            ComponentKind::ImaginaryPart => -1.0,
        };
        self.theta_combination(&[(1.0, a, b), (s, b, a)], 0.5)
    }

    /// Squared deviation from every transfer condition of `spec`.
    pub fn transfer_penalty(&self, spec: &TransferSpec) -> Result<SquaredSum> {
        let blocks = spec.constraint_blocks(self.n)?;
        let mut forms = Vec::new();
        for block in &blocks {
            for p in 0..self.n {
                for r in 0..self.n {
                    let mut f = Form::default();
                    for &(w, a, b) in &block.terms {
                        f.extend_scaled(&self.transfer_entry(a, b, p, r), w);
                    }
                    forms.push((f, block.target[(p, r)]));
                }
            }
        }
        Ok(SquaredSum { forms, scale: 1.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{transfer_residual, TransferKind};
    use crate::channel::{theta0, StinespringTensor};
    use crate::linalg::frobenius_norm;
    use crate::optimizer::param::random_isometry;

    fn layout_and_tensor(n: usize, dim_c: usize, seed: u64) -> (Layout, StinespringTensor) {
        (Layout { n, dim_c }, random_isometry(n, dim_c, seed).unwrap())
    }

    #[test]
    fn forms_match_direct_memory_operators() {
        let (layout, t) = layout_and_tensor(3, 2, 4);
        let v = t.isometry();
        let direct = frobenius_norm(&theta0(&t, 0, 2)).powi(2);
        assert!((layout.offdiag_sq(0, 2).value(&v) - direct).abs() < 1e-13);
        let dd = frobenius_norm(&(theta0(&t, 1, 1) - theta0(&t, 2, 2))).powi(2) / 2.0;
        assert!((layout.diag_diff_sq(1, 2).value(&v) - dd).abs() < 1e-13);
    }

    #[test]
    fn penalty_matches_transfer_residual() {
        let (layout, t) = layout_and_tensor(3, 2, 8);
        let v = t.isometry();
        for kind in [TransferKind::Offdiagonal, TransferKind::RealPart, TransferKind::ImaginaryPart, TransferKind::DiagDifference] {
            let spec = TransferSpec::pair(kind, 2, 3, Complex64::new(0.4, 0.0)).unwrap();
            let pen = layout.transfer_penalty(&spec).unwrap();
            let expected = transfer_residual(&t, &spec).unwrap();
            assert!((pen.max_deviation(&v) - expected).abs() < 1e-13, "{kind:?}");
        }
        let spec = TransferSpec::diagonal(&[(1, 0.3), (3, 0.9)]).unwrap();
        let pen = layout.transfer_penalty(&spec).unwrap();
        assert!((pen.max_deviation(&v) - transfer_residual(&t, &spec).unwrap()).abs() < 1e-13);
    }

    /// Central differences along random complex directions.
    #[test]
    fn gradients_match_finite_differences() {
        use rand::SeedableRng;
        let (layout, t) = layout_and_tensor(2, 2, 13);
        let v = t.isometry();
        let spec = TransferSpec::offdiagonal(2, 1, Complex64::new(0.3, 0.2)).unwrap();
        let sums = [
            layout.offdiag_sq(0, 1),
            layout.diag_diff_sq(0, 1),
            layout.component_sq(0, 1, ComponentKind::ImaginaryPart),
            layout.transfer_penalty(&spec).unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for sum in &sums {
            let mut g = ComplexMatrix::zeros(v.nrows(), v.ncols());
            sum.add_gradient(&v, 1.0, &mut g);
            for _ in 0..5 {
                let dir = crate::linalg::ginibre(v.nrows(), v.ncols(), &mut rng);
                let h = 1e-6;
                let fd = (sum.value(&(&v + &dir * Complex64::new(h, 0.0)))
                    - sum.value(&(&v - &dir * Complex64::new(h, 0.0))))
                    / (2.0 * h);
                let analytic = 2.0 * g.iter().zip(dir.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
                assert!((fd - analytic).abs() < 1e-7 * (1.0 + fd.abs()), "fd {fd} analytic {analytic}");
            }
        }
    }
}
