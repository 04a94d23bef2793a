// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::{Path, PathBuf};

use memxfer::bounds::{bound_diag, bound_offdiag, PairKind, TheoremCheck};
use memxfer::optimizer::{maximize_memory, reproduce_tables};
use memxfer::{ElementIndex, OptimizerResult, StinespringTensor, TableRow, TransferKind, TransferSpec};
use serde::Serialize;

use crate::config::{ExperimentConfig, Format, DEFAULT_SAMPLES, DEFAULT_TOL};
use crate::error::CliError;
use crate::suite;

pub const QUICK_RESTARTS: usize = 3;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub json: bool,
    pub quick: bool,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

struct Run {
    format: Format,
    out: Option<PathBuf>,
}

impl Run {
    fn new(cfg: &ExperimentConfig, flags: &Flags) -> Self {
        let format = if flags.json { Format::Json } else { cfg.output.format };
        let out = flags.out.clone().or_else(|| cfg.output.path.clone());
        Self { format, out }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn optimizer_config(cfg: &ExperimentConfig, flags: &Flags) -> memxfer::OptimizerConfig {
    let mut opt = cfg.optimizer();
    if let Some(seed) = flags.seed {
        opt.seed = seed;
    }
    if flags.quick {
        opt.restarts = QUICK_RESTARTS;
    }
    opt
}

fn render_checks(checks: &[TheoremCheck], format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(checks)? + "\n");
    }
    let mut text = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        text += &format!("{status}  {:<58} measured {:.3e}  threshold {:.3e}\n", c.name, c.measured, c.threshold);
    }
    Ok(text)
}

/// Returns whether every check passed.
pub fn verify(cfg: ExperimentConfig, flags: &Flags) -> Result<bool, CliError> {
    let tensor = match &cfg.tensor {
        Some(path) => Some(load_tensor(path)?),
        None => None,
    };
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    let mut checks = suite::theorems()?;
    checks.extend(suite::saturation()?);
    checks.extend(suite::invariants(samples, flags.seed.unwrap_or(0))?);
    if let Some(t) = &tensor {
        checks.extend(suite::tensor_file(t, cfg.transfer.as_ref(), tol)?);
    }
    let run = Run::new(&cfg, flags);
    run.emit(&render_checks(&checks, run.format)?)?;
    Ok(checks.iter().all(|c| c.passed))
}

fn load_tensor(path: &Path) -> Result<StinespringTensor, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    StinespringTensor::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
struct BoundRecord {
    name: String,
    value: f64,
}

fn bound_records(spec: &TransferSpec) -> Result<Vec<BoundRecord>, CliError> {
    let mut out = Vec::new();
    let mut push = |name: String, value: f64| out.push(BoundRecord { name, value });
    match spec.kind() {
        TransferKind::Diagonal => {
            let singles: Vec<(usize, f64)> = spec
                .elements()
                .iter()
                .filter_map(|e| match e.index {
                    ElementIndex::Single(a) => Some((a, e.accuracy.re)),
                    ElementIndex::Pair(_) => None,
                })
                .collect();
            for (i, &(a, ea)) in singles.iter().enumerate() {
                for &(b, eb) in &singles[i + 1..] {
                    push(format!("cross offdiag({a},{b})"), bound_diag(ea, eb, PairKind::Cross)?);
                }
            }
            for &(a, ea) in &singles {
                push(format!("outside offdiag({a},c)"), bound_diag(ea, 1.0, PairKind::OutsideA)?);
            }
        }
        kind => {
            for e in spec.elements() {
                let ElementIndex::Pair([a, b]) = e.index else { continue };
                let ideal = e.accuracy == memxfer::Complex64::new(1.0, 0.0);
                match kind {
                    TransferKind::Offdiagonal => {
                        let bound = bound_offdiag(e.accuracy.norm())?;
                        push(format!("offdiag({a},{b})"), bound);
                        push(format!("offdiag_sq({a},{b})"), bound * bound);
                        push(format!("diag_diff({a},{b})"), bound);
                    }
                    _ if !ideal => {}
                    TransferKind::RealPart => {
                        push(format!("im_part({a},{b})"), 0.0);
                        push(format!("diag_diff({a},{b})"), 0.0);
                    }
                    TransferKind::ImaginaryPart => {
                        push(format!("re_part({a},{b})"), 0.0);
                        push(format!("diag_diff({a},{b})"), 0.0);
                    }
                    TransferKind::DiagDifference => {
                        push(format!("re_part({a},{b})"), 0.0);
                        push(format!("im_part({a},{b})"), 0.0);
                    }
                    TransferKind::Diagonal => unreachable!(),
                }
            }
        }
    }
    Ok(out)
}

pub fn bounds(cfg: ExperimentConfig, flags: &Flags) -> Result<(), CliError> {
    let spec = cfg.transfer_or_default()?;
    let records = bound_records(&spec)?;
    if records.is_empty() {
        eprintln!("no closed-form bound applies to a non-ideal {:?} transfer", spec.kind());
    }
    let run = Run::new(&cfg, flags);
    let text = if run.format == Format::Json {
        serde_json::to_string_pretty(&records)? + "\n"
    } else {
        records.iter().map(|r| format!("{:<24} {:.5}\n", r.name, r.value)).collect()
    };
    run.emit(&text)
}

#[derive(Debug, Serialize)]
struct OptimizeReport<'a> {
    quick: bool,
    bound: f64,
    result: &'a OptimizerResult,
}

pub fn optimize(cfg: ExperimentConfig, flags: &Flags) -> Result<(), CliError> {
    let spec = cfg.transfer_or_default()?;
    let objective = cfg.objective_or_default();
    let opt = optimizer_config(&cfg, flags);
    let bound = objective.analytic_bound(&spec);
    let result = maximize_memory(&spec, objective, &opt)?;
    eprintln!("best value {:.6}  bound {:.6}  residual {:.3e}", result.best_value, bound, result.residual);
    if bound == 0.0 {
        eprintln!(
            "warning: ideal transfer; the erasure theorem predicts 0, optimizer reached {:.3e}",
            result.best_value
        );
    }
    if flags.quick {
        eprintln!("quick=true (restarts={QUICK_RESTARTS})");
    }
    if let Some(path) = &cfg.output.tensor {
        std::fs::write(path, result.tensor.to_json()?)?;
    }
    let run = Run::new(&cfg, flags);
    let text = if run.format == Format::Json {
        serde_json::to_string_pretty(&OptimizeReport { quick: flags.quick, bound, result: &result })? + "\n"
    } else {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["best_value", "bound", "residual", "iterations_used", "quick"])?;
        w.write_record([
            result.best_value.to_string(),
            bound.to_string(),
            result.residual.to_string(),
            result.iterations_used.to_string(),
            flags.quick.to_string(),
        ])?;
        String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8")
    };
    run.emit(&text)
}

#[derive(Debug, Serialize)]
struct TablesReport<'a> {
    quick: bool,
    rows: &'a [TableRow],
}

pub fn tables(cfg: ExperimentConfig, flags: &Flags) -> Result<(), CliError> {
    let opt = optimizer_config(&cfg, flags);
    let rows = reproduce_tables(&opt)?;
    if flags.quick {
        eprintln!("quick=true (restarts={QUICK_RESTARTS})");
    }
    let run = Run::new(&cfg, flags);
    let text = if run.format == Format::Json {
        serde_json::to_string_pretty(&TablesReport { quick: flags.quick, rows: &rows })? + "\n"
    } else {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &rows {
            w.serialize(row)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8")
    };
    run.emit(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use memxfer::Complex64;

    #[test]
    fn diagonal_bound_records() {
        let spec = TransferSpec::diagonal(&[(1, 0.3), (2, 0.8)]).unwrap();
        let values: Vec<String> = bound_records(&spec).unwrap().iter().map(|r| format!("{:.5}", r.value)).collect();
        assert_eq!(values, ["0.37417", "0.83666", "0.44721"]);
    }

    #[test]
    fn offdiagonal_bound_records() {
        let spec = TransferSpec::offdiagonal(2, 1, Complex64::new(0.3, 0.0)).unwrap();
        let records = bound_records(&spec).unwrap();
        assert_eq!(format!("{:.5}", records[0].value), "0.95394");
        assert_eq!(format!("{:.5}", records[1].value), "0.91000");
        let spec = TransferSpec::offdiagonal(2, 1, Complex64::new(1.0, 0.0)).unwrap();
        assert!(bound_records(&spec).unwrap().iter().all(|r| r.value == 0.0));
    }

    #[test]
    fn non_ideal_component_transfer_has_no_bound() {
        let spec = TransferSpec::pair(TransferKind::RealPart, 1, 2, Complex64::new(0.5, 0.0)).unwrap();
        assert!(bound_records(&spec).unwrap().is_empty());
    }
}
