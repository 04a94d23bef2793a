// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] memxfer::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for a run that completed but found no feasible point, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(memxfer::Error::Infeasible { .. }) => 1,
            _ => 2,
        }
    }
}
