// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! One restart of the penalty ascent.
//!
//! The iterate is an isometry `V`. Steps stay on the isometry set by moving
//! along `V(s) = exp(s K) V` with `K = Y V† − V Y†` anti-Hermitian, i.e. by
//! the Hermitian-generator parametrization re-centred at the current
//! point. `K` has rank at most `2n`, so the exponential is evaluated on
//! the span of `[V, Y]` only.

use num_complex::Complex64;

use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::optimizer::forms::SquaredSum;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-18;
const POLISH_ITERS: usize = 40;
const POLISH_FLOOR: f64 = 1e-15;

pub(crate) struct Problem {
    /// Maximized.
    pub objective: SquaredSum,
    /// Squared transfer-condition deviations.
    pub penalty: SquaredSum,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Schedule {
    pub max_iters: usize,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    pub penalty_cap: f64,
    pub constraint_tol: f64,
    pub step_tol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub v: ComplexMatrix,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct RestartOutcome {
    /// Best point with residual within the constraint tolerance.
    pub best: Option<Candidate>,
    pub iterations: usize,
    /// Smallest residual reached, feasible or not.
    pub best_residual: f64,
}

fn frob_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `exp(s K) V` restricted to `span[V, Y]`.
struct Geodesic {
    q: ComplexMatrix,
    coeff: ComplexMatrix,
    values: Vec<f64>,
    vectors: ComplexMatrix,
    base: ComplexMatrix,
}

impl Geodesic {
    fn new(v: &ComplexMatrix, y: &ComplexMatrix) -> Self {
        let (d, n) = (v.nrows(), v.ncols());
        let scale = y.norm().max(f64::MIN_POSITIVE);
        let mut perp = y - v * (v.adjoint() * y);
        let mut basis: Vec<nalgebra::DVector<Complex64>> = (0..n).map(|j| v.column(j).into_owned()).collect();
        for j in 0..n {
            let mut col = perp.column(j).into_owned();
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dotc(&col);
                    col -= b * proj;
                }
            }
            let norm = col.norm();
            if norm > 1e-13 * scale {
                basis.push(col.unscale(norm));
            }
            perp.column_mut(j).copy_from(&col);
        }
        let q = ComplexMatrix::from_columns(&basis);
        let a = q.adjoint() * v;
        let b = q.adjoint() * y;
        // i(b a† − a b†) is Hermitian; exp(sM) = exp(−i s H).
        let i = Complex64::new(0.0, 1.0);
        let h = (&b * a.adjoint() - &a * b.adjoint()) * i;
        let (values, vectors) = hermitian_eigen(&h);
        debug_assert_eq!(q.nrows(), d);
        Self { q, coeff: a, values: values.iter().copied().collect(), vectors, base: v.clone() }
    }

    fn at(&self, s: f64) -> ComplexMatrix {
        let m = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &w) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -s * w) - Complex64::new(1.0, 0.0);
            for i in 0..m {
                scaled[(i, j)] *= phase;
            }
        }
        let delta = scaled * (self.vectors.adjoint() * &self.coeff);
        &self.base + &self.q * delta
    }
}

/// Restores `V†V = I` after accumulated roundoff.
pub(crate) fn reorthonormalize(v: &ComplexMatrix) -> ComplexMatrix {
    let qr = v.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

impl Problem {
    fn merit(&self, v: &ComplexMatrix, mu: f64) -> f64 {
        self.objective.value(v) - mu * self.penalty.value(v)
    }

    fn merit_gradient(&self, v: &ComplexMatrix, mu: f64) -> (f64, ComplexMatrix) {
        let mut g = ComplexMatrix::zeros(v.nrows(), v.ncols());
        let obj = self.objective.add_gradient(v, 1.0, &mut g);
        let pen = self.penalty.add_gradient(v, -mu, &mut g);
        (obj - mu * pen, g)
    }

    /// Gradient ascent on the penalized objective at fixed `mu`. Returns
    /// the number of iterations used.
    fn ascend(&self, v: &mut ComplexMatrix, mu: f64, budget: usize, step_tol: f64, step: &mut f64) -> usize {
        let mut used = 0;
        let mut merit = self.merit(v, mu);
        while used < budget {
            used += 1;
            let (_, g) = self.merit_gradient(v, mu);
            let a = v.adjoint() * &g;
            // ‖K‖² for K = G V† − V G†.
            let slope = 2.0 * g.norm_squared() - 2.0 * (&a * &a).trace().re;
            if slope <= 1e-300 {
                break;
            }
            let geo = Geodesic::new(v, &g);
            let mut s = *step;
            let mut accepted = None;
            while s >= MIN_STEP {
                let trial = geo.at(s);
                let value = self.merit(&trial, mu);
                if value >= merit + ARMIJO * s * slope {
                    accepted = Some((trial, value));
                    break;
                }
                s *= 0.5;
            }
            let Some((trial, value)) = accepted else { break };
            *step = if s == *step { 2.0 * s } else { s };
            let gain = value - merit;
            *v = trial;
            merit = value;
            if gain <= step_tol * merit.abs().max(1.0) {
                break;
            }
        }
        used
    }

    /// Gauss–Newton projection onto the transfer conditions: each step is
    /// the minimum-norm generator cancelling the linearized deviations.
    pub(crate) fn polish(&self, v: &ComplexMatrix) -> (ComplexMatrix, f64) {
        let mut v = v.clone();
        let mut residual = self.penalty.max_deviation(&v);
        for _ in 0..POLISH_ITERS {
            if residual <= POLISH_FLOOR {
                break;
            }
            let lin = self.penalty.linearize(&v);
            let m = lin.len();
            let products: Vec<ComplexMatrix> = lin.iter().map(|(_, g)| v.adjoint() * g).collect();
            let mut gram = nalgebra::DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                for j in i..m {
                    let value = 2.0 * frob_inner(&lin[i].1, &lin[j].1).re
                        - 2.0 * (&products[i] * &products[j]).trace().re;
                    gram[(i, j)] = value;
                    gram[(j, i)] = value;
                }
            }
            let rhs = nalgebra::DVector::from_iterator(m, lin.iter().map(|(phi, _)| -phi));
            let eig = gram.symmetric_eigen();
            let top = eig.eigenvalues.iter().fold(0.0f64, |acc, &w| acc.max(w.abs()));
            if top <= 0.0 {
                break;
            }
            let proj = eig.eigenvectors.transpose() * &rhs;
            let mut coeffs = nalgebra::DVector::<f64>::zeros(m);
            for (k, &w) in eig.eigenvalues.iter().enumerate() {
                if w.abs() > 1e-11 * top {
                    coeffs += eig.eigenvectors.column(k) * (proj[k] / w);
                }
            }
            let mut y = ComplexMatrix::zeros(v.nrows(), v.ncols());
            for (k, (_, g)) in lin.iter().enumerate() {
                y += g * Complex64::new(coeffs[k], 0.0);
            }
            let geo = Geodesic::new(&v, &y);
            let mut s = 1.0;
            let mut improved = false;
            for _ in 0..20 {
                let trial = geo.at(s);
                let r = self.penalty.max_deviation(&trial);
                if r < residual {
                    v = trial;
                    residual = r;
                    improved = true;
                    break;
                }
                s *= 0.5;
            }
            if !improved {
                break;
            }
        }
        let v = reorthonormalize(&v);
        let residual = self.penalty.max_deviation(&v);
        (v, residual)
    }

    fn consider(&self, best: &mut Option<Candidate>, v: ComplexMatrix, residual: f64, tol: f64) {
        if residual > tol {
            return;
        }
        let objective = self.objective.value(&v);
        if best.as_ref().is_none_or(|b| objective > b.objective) {
            *best = Some(Candidate { v, objective });
        }
    }

    pub(crate) fn run(&self, start: ComplexMatrix, schedule: &Schedule) -> RestartOutcome {
        let tol = schedule.constraint_tol;
        let mut v = start;
        let mut best = None;
        let start_residual = self.penalty.max_deviation(&v);
        let mut best_residual = start_residual;
        self.consider(&mut best, v.clone(), start_residual, tol);

        let mut mu = schedule.penalty_init;
        let mut step = 0.1;
        let mut iterations = 0;
        loop {
            iterations += self.ascend(&mut v, mu, schedule.max_iters - iterations, schedule.step_tol, &mut step);
            v = reorthonormalize(&v);
            let raw_residual = self.penalty.max_deviation(&v);
            let (polished, residual) = self.polish(&v);
            best_residual = best_residual.min(residual);
            if residual <= tol {
                self.consider(&mut best, polished.clone(), residual, tol);
                v = polished;
            }
            if raw_residual <= tol || iterations >= schedule.max_iters || mu >= schedule.penalty_cap {
                break;
            }
            mu = (mu * schedule.penalty_growth).min(schedule.penalty_cap);
            step = step.min(1.0 / mu);
        }
        RestartOutcome { best, iterations, best_residual }
    }
}
