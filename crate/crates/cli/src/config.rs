// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration documents.

use std::path::{Path, PathBuf};

use memxfer::{Complex64, Objective, OptimizerConfig, TransferSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Where `optimize` writes the optimal tensor.
    pub tensor: Option<PathBuf>,
}

/// One JSON document for every subcommand; fields a command does not use
/// are ignored by it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub dim_c: Option<usize>,
    pub transfer: Option<TransferSpec>,
    pub objective: Option<Objective>,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Tensor file checked by `verify`.
    pub tensor: Option<PathBuf>,
    /// Random isometries in the `verify` invariant suite.
    pub samples: Option<usize>,
    /// Transfer tolerance for `verify` on a tensor file.
    pub tol: Option<f64>,
}

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-12;

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Optimizer settings with the top-level `n`/`dim_c` applied.
    pub fn optimizer(&self) -> OptimizerConfig {
        let mut cfg = self.optimizer.clone();
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(dim_c) = self.dim_c {
            cfg.dim_c = dim_c;
        }
        cfg
    }

    pub fn transfer_or_default(&self) -> Result<TransferSpec, CliError> {
        match &self.transfer {
            Some(spec) => Ok(spec.clone()),
            None => Ok(TransferSpec::offdiagonal(2, 1, Complex64::new(0.3, 0.0))?),
        }
    }

    pub fn objective_or_default(&self) -> Objective {
        self.objective.unwrap_or(Objective::OffdiagSq { indices: [1, 2] })
    }
}
