// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be positive, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("indices must differ, got ({0}, {0})")]
    EqualIndices(usize),

    #[error("tensor is not an isometry (residual {residual:e} > {tolerance:e})")]
    NotIsometric { residual: f64, tolerance: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("accuracy {value} outside the admissible range {range}")]
    InvalidAccuracy { value: f64, range: &'static str },

    #[error("invalid transfer spec: {0}")]
    InvalidSpec(String),

    #[error("expected {expected} parameters, got {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no feasible point found (best residual {best_residual:e} > {tolerance:e})")]
    Infeasible { best_residual: f64, tolerance: f64 },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Serialization(err.to_string())
    }
}
