// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulation, verification and optimization of quantum channels that
//! transfer selected density-matrix elements from a source system A to a
//! target system B.
//!
//! A channel is stored as a [`StinespringTensor`]: the ancilla vectors
//! `C^p_{kl}` describing how the joint unitary acts on `|p> ⊗ |1̄> ⊗ |c>`.
//! From it we read off the final states of A and B and the memory
//! operators `Θ_pr`, whose norms measure how much of the initial element
//! `λ_pr` survives in A after the transfer.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, density matrices, fidelity.
//! - [`channel`]: the Stinespring tensor, `Θ_pr`, final states.
//! - [`memory`]: memory measures and a finite-difference oracle.
//! - [`bounds`]: transfer specifications, accuracy–memory bounds, the
//!   saturating constructions and the ideal-transfer erasure checks.
//! - [`optimizer`]: multi-start penalty ascent over isometries.

pub mod bounds;
pub mod channel;
mod error;
pub mod linalg;
pub mod memory;
pub mod optimizer;
mod par;

pub use bounds::{ElementIndex, TransferElement, TransferKind, TransferSpec};
pub use channel::{MemoryOperator, StinespringTensor};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix};
pub use memory::{ComponentKind, MemoryReport};
pub use optimizer::{Objective, OptimizerConfig, OptimizerResult, TableRow};

pub use num_complex::Complex64;
