// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Multi-start maximization of a memory measure over all isometric
//! channels that satisfy a transfer specification.
//!
//! Each restart runs a quadratic-penalty ascent: maximize
//! `objective − μ·Σ|deviation|²` over isometries, multiplying `μ` by
//! `penalty_growth` whenever a stage ends above `constraint_tol`, with a
//! Gauss–Newton projection onto the transfer conditions after every stage.
//! Restarts are independent; the best feasible result wins, ties going to
//! the lowest restart index.

mod ascent;
mod forms;
mod param;

pub use param::{hermitian_generator, param_count, parametrize_isometry, random_isometry, random_params};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_diag, bound_offdiag, ElementIndex, PairKind, TransferKind, TransferSpec};
use crate::channel::{isometry_residual, StinespringTensor};
use crate::error::{Error, Result};
use crate::memory::{memory_component, memory_diag_diff, memory_offdiag, ComponentKind};
use crate::par;
use ascent::{Problem, Schedule};
use forms::Layout;

/// Penalty weights never grow past this.
pub const PENALTY_CAP: f64 = 1e10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerConfig {
    pub n: usize,
    pub dim_c: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    pub constraint_tol: f64,
    pub step_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            n: 3,
            dim_c: 2,
            restarts: 20,
            max_iters: 500,
            seed: 0,
            penalty_init: 10.0,
            penalty_growth: 10.0,
            constraint_tol: 1e-8,
            step_tol: 1e-9,
        }
    }
}

impl OptimizerConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.n == 0 || self.dim_c == 0 {
            return fail("n and dim_c must be positive");
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return fail("restarts and max_iters must be positive");
        }
        if !(self.penalty_init > 0.0) {
            return fail("penalty_init must be positive");
        }
        if !(self.penalty_growth > 1.0) {
            return fail("penalty_growth must exceed 1");
        }
        if !(self.constraint_tol >= 1e-10) {
            return fail("constraint_tol must be at least 1e-10");
        }
        if !(self.step_tol > 0.0) {
            return fail("step_tol must be positive");
        }
        Ok(())
    }

    fn schedule(&self) -> Schedule {
        Schedule {
            max_iters: self.max_iters,
            penalty_init: self.penalty_init,
            penalty_growth: self.penalty_growth,
            penalty_cap: PENALTY_CAP,
            constraint_tol: self.constraint_tol,
            step_tol: self.step_tol,
        }
    }

    /// Generator state of restart `index`: the config seed with the restart
    /// index as the ChaCha stream.
    pub fn restart_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// Memory functional to maximize. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Objective {
    /// `‖Θ_ac‖`.
    Offdiag { indices: [usize; 2] },
    /// `‖Θ_ac‖²`.
    OffdiagSq { indices: [usize; 2] },
    /// `‖Θ_aa − Θ_bb‖ / √2`.
    DiagDiff { indices: [usize; 2] },
    /// `‖Θ_ab ± Θ_ba‖ / √2`.
    Component { indices: [usize; 2], part: ComponentKind },
}

impl Objective {
    pub fn indices(&self) -> [usize; 2] {
        match *self {
            Objective::Offdiag { indices }
            | Objective::OffdiagSq { indices }
            | Objective::DiagDiff { indices }
            | Objective::Component { indices, .. } => indices,
        }
    }

    /// Value on a tensor, through the public memory measures.
    pub fn evaluate(&self, t: &StinespringTensor) -> Result<f64> {
        let [a, b] = self.indices();
        match *self {
            Objective::Offdiag { .. } => memory_offdiag(t, a, b),
            Objective::OffdiagSq { .. } => memory_offdiag(t, a, b).map(|m| m * m),
            Objective::DiagDiff { .. } => memory_diag_diff(t, a, b),
            Objective::Component { part, .. } => memory_component(t, a, b, part),
        }
    }

    fn squared_form(&self, layout: &Layout) -> forms::SquaredSum {
        let [a, b] = self.indices();
        let (a, b) = (a - 1, b - 1);
        match *self {
            Objective::Offdiag { .. } | Objective::OffdiagSq { .. } => layout.offdiag_sq(a, b),
            Objective::DiagDiff { .. } => layout.diag_diff_sq(a, b),
            Objective::Component { part, .. } => layout.component_sq(a, b, part),
        }
    }

    fn validate_for(&self, n: usize) -> Result<()> {
        let [a, b] = self.indices();
        for i in [a, b] {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, max: n });
            }
        }
        if a == b {
            return Err(Error::EqualIndices(a));
        }
        Ok(())
    }

    /// Closed-form upper bound on this objective under `spec`; 1 where no
    /// sharper bound is known.
    pub fn analytic_bound(&self, spec: &TransferSpec) -> f64 {
        let [a, b] = self.indices();
        let same_pair = |x: usize, y: usize| (x == a && y == b) || (x == b && y == a);
        let mut bound = 1.0f64;
        match spec.kind() {
            TransferKind::Diagonal => {
                let eps_of = |i: usize| {
                    spec.elements().iter().find_map(|e| match e.index {
                        ElementIndex::Single(j) if j == i => Some(e.accuracy.re),
                        _ => None,
                    })
                };
                if matches!(self, Objective::Offdiag { .. } | Objective::OffdiagSq { .. }) {
                    let value = match (eps_of(a), eps_of(b)) {
                        (Some(x), Some(y)) => bound_diag(x, y, PairKind::Cross).ok(),
                        (Some(x), None) => bound_diag(x, 1.0, PairKind::OutsideA).ok(),
                        (None, Some(y)) => bound_diag(1.0, y, PairKind::OutsideB).ok(),
                        (None, None) => None,
                    };
                    if let Some(v) = value {
                        bound = bound.min(v);
                    }
                }
            }
            kind => {
                for e in spec.elements() {
                    let ElementIndex::Pair([x, y]) = e.index else { continue };
                    if !same_pair(x, y) {
                        continue;
                    }
                    let ideal = (e.accuracy - num_complex::Complex64::new(1.0, 0.0)).norm() == 0.0;
                    let erased = match (kind, self) {
                        (TransferKind::Offdiagonal, Objective::Offdiag { .. } | Objective::OffdiagSq { .. })
                        | (TransferKind::Offdiagonal, Objective::DiagDiff { .. }) => {
                            bound = bound.min(bound_offdiag(e.accuracy.norm()).unwrap_or(1.0));
                            false
                        }
                        (TransferKind::RealPart, Objective::Component { part: ComponentKind::ImaginaryPart, .. })
                        | (TransferKind::RealPart, Objective::DiagDiff { .. })
                        | (TransferKind::ImaginaryPart, Objective::Component { part: ComponentKind::RealPart, .. })
                        | (TransferKind::ImaginaryPart, Objective::DiagDiff { .. })
                        | (TransferKind::DiagDifference, Objective::Component { .. }) => ideal,
                        _ => false,
                    };
                    if erased {
                        bound = 0.0;
                    }
                }
            }
        }
        match self {
            Objective::OffdiagSq { .. } => bound * bound,
            _ => bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub best_value: f64,
    pub tensor: StinespringTensor,
    pub residual: f64,
    /// Best feasible value of each restart, `None` where a restart never
    /// became feasible.
    pub trace: Vec<Option<f64>>,
    pub iterations_used: usize,
}

/// Runs `config.restarts` independent ascents (in parallel with the
/// `parallel` feature) and returns the best feasible result.
pub fn maximize_memory(spec: &TransferSpec, objective: Objective, config: &OptimizerConfig) -> Result<OptimizerResult> {
    run(spec, objective, config, None, Execution::Default)
}

/// [`maximize_memory`] on the calling thread only.
pub fn maximize_memory_sequential(
    spec: &TransferSpec,
    objective: Objective,
    config: &OptimizerConfig,
) -> Result<OptimizerResult> {
    run(spec, objective, config, None, Execution::Sequential)
}

/// [`maximize_memory`] with restart 0 started at `start` instead of a
/// random isometry.
pub fn maximize_memory_from(
    spec: &TransferSpec,
    objective: Objective,
    config: &OptimizerConfig,
    start: &StinespringTensor,
) -> Result<OptimizerResult> {
    if start.n() != config.n || start.dim_c() != config.dim_c {
        return Err(Error::DimensionMismatch { expected: config.n * config.dim_c, found: start.n() * start.dim_c() });
    }
    let residual = isometry_residual(start);
    if residual > 1e-12 {
        return Err(Error::NotIsometric { residual, tolerance: 1e-12 });
    }
    run(spec, objective, config, Some(start), Execution::Default)
}

#[derive(Clone, Copy)]
enum Execution {
    Default,
    Sequential,
}

fn run(
    spec: &TransferSpec,
    objective: Objective,
    config: &OptimizerConfig,
    start: Option<&StinespringTensor>,
    execution: Execution,
) -> Result<OptimizerResult> {
    config.validate()?;
    spec.validate_for(config.n)?;
    objective.validate_for(config.n)?;
    let layout = Layout { n: config.n, dim_c: config.dim_c };
    let problem = Problem { objective: objective.squared_form(&layout), penalty: layout.transfer_penalty(spec)? };
    let schedule = config.schedule();

    let restart = |index: usize| {
        let initial = match (index, start) {
            (0, Some(t)) => t.isometry(),
            _ => {
                let mut rng = config.restart_rng(index);
                let params = random_params(config.n, config.dim_c, &mut rng);
                parametrize_isometry(&params, config.n, config.dim_c)
                    .expect("parameter count matches dimensions")
                    .isometry()
            }
        };
        problem.run(initial, &schedule)
    };
    let outcomes = match execution {
        Execution::Default => par::map_indices(config.restarts, restart),
        Execution::Sequential => par::map_indices_sequential(config.restarts, restart),
    };

    let mut winner: Option<&ascent::Candidate> = None;
    for candidate in outcomes.iter().filter_map(|o| o.best.as_ref()) {
        if winner.is_none_or(|w| candidate.objective > w.objective) {
            winner = Some(candidate);
        }
    }
    let iterations_used = outcomes.iter().map(|o| o.iterations).sum();
    let Some(winner) = winner else {
        let best_residual = outcomes.iter().map(|o| o.best_residual).fold(f64::INFINITY, f64::min);
        return Err(Error::Infeasible { best_residual, tolerance: config.constraint_tol });
    };
    let tensor = StinespringTensor::from_isometry(config.n, config.dim_c, &winner.v)?;
    let trace = outcomes
        .iter()
        .map(|o| {
            o.best.as_ref().map(|c| {
                let t = StinespringTensor::from_isometry(config.n, config.dim_c, &c.v).expect("dimensions match");
                objective.evaluate(&t).expect("candidates are isometric")
            })
        })
        .collect();
    Ok(OptimizerResult {
        best_value: objective.evaluate(&tensor)?,
        residual: crate::bounds::transfer_residual(&tensor, spec)?,
        tensor,
        trace,
        iterations_used,
    })
}

/// One row of the ancilla-dimension × accuracy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub dim_c: usize,
    pub epsilon: f64,
    pub best_theta_sq: f64,
    pub bound: f64,
    pub residual: f64,
    pub restarts: usize,
}

pub const TABLE_DIM_C: [usize; 3] = [2, 3, 5];
pub const TABLE_EPSILON: [f64; 2] = [0.3, 0.8];

/// Maximizes `‖Θ_12‖²` under `r̃_21 = ε λ_21` at `n = 3` for every
/// `dim_c ∈ {2, 3, 5}` and `ε ∈ {0.3, 0.8}`. `base` supplies everything
/// except `n` and `dim_c`.
pub fn reproduce_tables(base: &OptimizerConfig) -> Result<Vec<TableRow>> {
    let cells: Vec<(usize, f64)> =
        TABLE_DIM_C.iter().flat_map(|&d| TABLE_EPSILON.iter().map(move |&e| (d, e))).collect();
    let results = par::map_indices(cells.len(), |i| {
        let (dim_c, epsilon) = cells[i];
        let config = OptimizerConfig { n: 3, dim_c, ..base.clone() };
        let spec = TransferSpec::offdiagonal(2, 1, num_complex::Complex64::new(epsilon, 0.0))?;
        let result = maximize_memory(&spec, Objective::OffdiagSq { indices: [1, 2] }, &config)?;
        Ok(TableRow {
            dim_c,
            epsilon,
            best_theta_sq: result.best_value,
            bound: 1.0 - epsilon * epsilon,
            residual: result.residual,
            restarts: config.restarts,
        })
    });
    results.into_iter().collect()
}
