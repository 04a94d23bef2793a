// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Transfer specifications, accuracy–memory bounds, the channels that
//! saturate them, and checks of the ideal-transfer erasure theorems.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{transfer_coefficients0, StinespringTensor};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::memory::{component0, diag_diff0, offdiag0, ComponentKind};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which quantity of A's state is copied into B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferKind {
    /// `r̃_aa = ε λ_aa`.
    Diagonal,
    /// `r̃_ab = η λ_ab`, `η` complex.
    #[serde(alias = "off-diagonal")]
    Offdiagonal,
    /// `Re r̃_ab = ε Re λ_ab`.
    RealPart,
    /// `Im r̃_ab = ε Im λ_ab`.
    ImaginaryPart,
    /// `r̃_aa − r̃_bb = ε (λ_aa − λ_bb)`.
    DiagDifference,
}

/// 1-based element index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementIndex {
    Single(usize),
    Pair([usize; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferElement {
    pub index: ElementIndex,
    pub accuracy: Complex64,
}

/// Transferred elements and their accuracy factors. All elements share one
/// kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecDocument", into = "SpecDocument")]
pub struct TransferSpec {
    kind: TransferKind,
    elements: Vec<TransferElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum AccuracyValue {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum AccuracyList {
    Many(Vec<AccuracyValue>),
    One(AccuracyValue),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    kind: TransferKind,
    indices: Vec<ElementIndex>,
    accuracy: AccuracyList,
}

impl TryFrom<SpecDocument> for TransferSpec {
    type Error = Error;

    fn try_from(doc: SpecDocument) -> Result<Self> {
        let values = match doc.accuracy {
            AccuracyList::One(v) => vec![v; doc.indices.len()],
            // A bare `[re, im]` for a single element is one complex value.
            AccuracyList::Many(vs) => match vs.as_slice() {
                [AccuracyValue::Real(re), AccuracyValue::Real(im)] if doc.indices.len() == 1 => {
                    vec![AccuracyValue::Complex([*re, *im])]
                }
                _ => vs,
            },
        };
        if values.len() != doc.indices.len() {
            return Err(Error::InvalidSpec(format!(
                "{} indices but {} accuracy values",
                doc.indices.len(),
                values.len()
            )));
        }
        let elements = doc
            .indices
            .into_iter()
            .zip(values)
            .map(|(index, v)| TransferElement {
                index,
                accuracy: match v {
                    AccuracyValue::Real(x) => Complex64::new(x, 0.0),
                    AccuracyValue::Complex([re, im]) => Complex64::new(re, im),
                },
            })
            .collect();
        TransferSpec::new(doc.kind, elements)
    }
}

impl From<TransferSpec> for SpecDocument {
    fn from(spec: TransferSpec) -> Self {
        let accuracy = spec
            .elements
            .iter()
            .map(|e| {
                if e.accuracy.im == 0.0 {
                    AccuracyValue::Real(e.accuracy.re)
                } else {
                    AccuracyValue::Complex([e.accuracy.re, e.accuracy.im])
                }
            })
            .collect();
        SpecDocument {
            kind: spec.kind,
            indices: spec.elements.iter().map(|e| e.index).collect(),
            accuracy: AccuracyList::Many(accuracy),
        }
    }
}

impl TransferSpec {
    pub fn new(kind: TransferKind, elements: Vec<TransferElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSpec("no elements".into()));
        }
        for e in &elements {
            match (kind, e.index) {
                (TransferKind::Diagonal, ElementIndex::Single(a)) => {
                    if a == 0 {
                        return Err(Error::IndexOutOfRange { index: 0, max: usize::MAX });
                    }
                }
                (TransferKind::Diagonal, ElementIndex::Pair(_)) => {
                    return Err(Error::InvalidSpec("diagonal elements take a single index".into()));
                }
                (_, ElementIndex::Single(_)) => {
                    return Err(Error::InvalidSpec(format!("{kind:?} elements take an index pair")));
                }
                (_, ElementIndex::Pair([a, b])) => {
                    if a == 0 || b == 0 {
                        return Err(Error::IndexOutOfRange { index: 0, max: usize::MAX });
                    }
                    if a == b {
                        return Err(Error::EqualIndices(a));
                    }
                }
            }
            if kind == TransferKind::Offdiagonal {
                let m = e.accuracy.norm();
                if !(m > 0.0 && m <= 1.0) {
                    return Err(Error::InvalidAccuracy { value: m, range: "0 < |eta| <= 1" });
                }
            } else {
                check_unit_interval(e.accuracy.re)?;
                if e.accuracy.im != 0.0 {
                    return Err(Error::InvalidAccuracy { value: e.accuracy.im, range: "real accuracy" });
                }
            }
        }
        for (i, x) in elements.iter().enumerate() {
            if elements[..i].iter().any(|y| y.index == x.index) {
                return Err(Error::InvalidSpec(format!("duplicate element {:?}", x.index)));
            }
        }
        Ok(Self { kind, elements })
    }

    /// Diagonal transfer of `(a, ε_a)` pairs.
    pub fn diagonal(elements: &[(usize, f64)]) -> Result<Self> {
        Self::new(
            TransferKind::Diagonal,
            elements
                .iter()
                .map(|&(a, eps)| TransferElement {
                    index: ElementIndex::Single(a),
                    accuracy: Complex64::new(eps, 0.0),
                })
                .collect(),
        )
    }

    /// `r̃_ab = η λ_ab`.
    pub fn offdiagonal(a: usize, b: usize, eta: Complex64) -> Result<Self> {
        Self::pair(TransferKind::Offdiagonal, a, b, eta)
    }

    pub fn pair(kind: TransferKind, a: usize, b: usize, accuracy: Complex64) -> Result<Self> {
        Self::new(kind, vec![TransferElement { index: ElementIndex::Pair([a, b]), accuracy }])
    }

    pub fn kind(&self) -> TransferKind {
        self.kind
    }

    pub fn elements(&self) -> &[TransferElement] {
        &self.elements
    }

    /// The same elements with every accuracy set to 1.
    pub fn ideal(&self) -> Self {
        Self {
            kind: self.kind,
            elements: self.elements.iter().map(|e| TransferElement { accuracy: ONE, ..*e }).collect(),
        }
    }

    /// Checks the spec against the dimension `n` of A and B.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        for e in &self.elements {
            let indices: &[usize] = match &e.index {
                ElementIndex::Single(a) => std::slice::from_ref(a),
                ElementIndex::Pair(p) => p,
            };
            for &i in indices {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, max: n });
                }
            }
        }
        if self.kind == TransferKind::Diagonal && self.elements.len() >= n {
            return Err(Error::InvalidSpec(format!(
                "at most {} independent diagonal elements for n = {n}",
                n - 1
            )));
        }
        Ok(())
    }

    /// Each element as a linear condition on the transfer coefficients.
    pub(crate) fn constraint_blocks(&self, n: usize) -> Result<Vec<ConstraintBlock>> {
        self.validate_for(n)?;
        let unit = |i: usize, j: usize| {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(i, j)] = ONE;
            m
        };
        Ok(self
            .elements
            .iter()
            .map(|e| {
                let acc = e.accuracy;
                match (self.kind, e.index) {
                    (TransferKind::Diagonal, ElementIndex::Single(a)) => {
                        let a = a - 1;
                        ConstraintBlock { terms: vec![(ONE, a, a)], target: unit(a, a) * acc }
                    }
                    (kind, ElementIndex::Pair([a, b])) => {
                        let (a, b) = (a - 1, b - 1);
                        match kind {
                            TransferKind::Offdiagonal => {
                                ConstraintBlock { terms: vec![(ONE, a, b)], target: unit(a, b) * acc }
                            }
                            TransferKind::RealPart => ConstraintBlock {
                                terms: vec![(ONE, a, b), (ONE, b, a)],
                                target: (unit(a, b) + unit(b, a)) * acc,
                            },
                            TransferKind::ImaginaryPart => ConstraintBlock {
                                terms: vec![(ONE, a, b), (-ONE, b, a)],
                                target: (unit(a, b) - unit(b, a)) * acc,
                            },
                            TransferKind::DiagDifference => ConstraintBlock {
                                terms: vec![(ONE, a, a), (-ONE, b, b)],
                                target: (unit(a, a) - unit(b, b)) * acc,
                            },
                            TransferKind::Diagonal => unreachable!("validated in new"),
                        }
                    }
                    (_, ElementIndex::Single(_)) => unreachable!("validated in new"),
                }
            })
            .collect())
    }
}

fn check_unit_interval(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAccuracy { value: eps, range: "0 < eps <= 1" })
    }
}

/// The condition `Σ_j w_j X^{a_j b_j} = target`, where
/// `X^{ab}[(p, r)] = Σ_k <C^r_{kb}|C^p_{ka}>` is the coefficient of `λ_pr`
/// in `r̃_ab`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ConstraintBlock {
    pub terms: Vec<(Complex64, usize, usize)>,
    pub target: ComplexMatrix,
}

impl ConstraintBlock {
    pub fn residual_matrix(&self, t: &StinespringTensor) -> ComplexMatrix {
        let mut r = -self.target.clone();
        for &(w, a, b) in &self.terms {
            r += transfer_coefficients0(t, a, b) * w;
        }
        r
    }
}

/// Largest deviation from the transfer conditions; 0 means the transfer
/// holds exactly for every initial state of A.
pub fn transfer_residual(t: &StinespringTensor, spec: &TransferSpec) -> Result<f64> {
    let blocks = spec.constraint_blocks(t.n())?;
    Ok(blocks
        .iter()
        .flat_map(|b| b.residual_matrix(t).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max))
}

/// Which off-diagonal element a diagonal-transfer bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    /// `λ_ab` with both `a` and `b` transferred.
    Cross,
    /// `λ_ac` with only `a` transferred.
    OutsideA,
    /// `λ_bc` with only `b` transferred.
    OutsideB,
}

/// Largest memory on an off-diagonal element compatible with transferring
/// `λ_aa` and `λ_bb` with accuracies `eps_a`, `eps_b`.
pub fn bound_diag(eps_a: f64, eps_b: f64, pair: PairKind) -> Result<f64> {
    check_unit_interval(eps_a)?;
    check_unit_interval(eps_b)?;
    Ok(match pair {
        PairKind::Cross => ((1.0 - eps_a) * (1.0 - eps_b)).sqrt(),
        PairKind::OutsideA => (1.0 - eps_a).sqrt(),
        PairKind::OutsideB => (1.0 - eps_b).sqrt(),
    })
}

/// `‖Θ_ab‖ ≤ sqrt(1 − |η|²)` under `r̃_ab = η λ_ab`.
pub fn bound_offdiag(eta_abs: f64) -> Result<f64> {
    if !(eta_abs > 0.0 && eta_abs <= 1.0) {
        return Err(Error::InvalidAccuracy { value: eta_abs, range: "0 < |eta| <= 1" });
    }
    Ok((1.0 - eta_abs * eta_abs).sqrt())
}

/// `‖Θ_aa − Θ_bb‖/√2 ≤ sqrt(1 − ε²)` under `r̃_ab = ε λ_ab`.
pub fn bound_diagdiff(eps: f64) -> Result<f64> {
    check_unit_interval(eps)?;
    Ok((1.0 - eps * eps).sqrt())
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `n = 3`, `dim_c = 1` channel transferring `λ_11`, `λ_22` with accuracies
/// `eps_1`, `eps_2` that keeps the largest possible memory on every
/// off-diagonal element.
pub fn construct_diag_optimal(eps_1: f64, eps_2: f64) -> Result<StinespringTensor> {
    check_unit_interval(eps_1)?;
    check_unit_interval(eps_2)?;
    let mut t = StinespringTensor::zeros(3, 1)?;
    t.set(1, 1, 1, 1, real(eps_1.sqrt()))?;
    t.set(1, 1, 3, 1, real((1.0 - eps_1).sqrt()))?;
    t.set(2, 2, 2, 1, real(eps_2.sqrt()))?;
    t.set(2, 2, 3, 1, real((1.0 - eps_2).sqrt()))?;
    t.set(3, 3, 3, 1, real(1.0))?;
    Ok(t)
}

/// `dim_c = 1` channel realizing `r̃_21 = η λ_21` with
/// `‖Θ_12‖ = sqrt(1 − |η|²)`. States `p ≥ 3` pass through as in the
/// identity channel.
pub fn construct_offdiag_optimal(n: usize, eta: Complex64) -> Result<StinespringTensor> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let m = eta.norm();
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::InvalidAccuracy { value: m, range: "0 < |eta| <= 1" });
    }
    let mut t = StinespringTensor::zeros(n, 1)?;
    t.set(1, 1, 1, 1, real(1.0))?;
    t.set(2, 2, 1, 1, real((1.0 - m * m).max(0.0).sqrt()))?;
    t.set(2, 1, 2, 1, eta)?;
    for p in 3..=n {
        t.set(p, p, 1, 1, real(1.0))?;
    }
    Ok(t)
}

/// `n = 3`, `dim_c = 1` channel realizing `r̃_12 = ε λ_12` with the largest
/// memory on `λ_11 − λ_22`, `sqrt(1 − ε²)`.
pub fn construct_diagdiff_optimal(eps: f64) -> Result<StinespringTensor> {
    check_unit_interval(eps)?;
    let mut t = StinespringTensor::zeros(3, 1)?;
    t.set(1, 1, 1, 1, real(1.0))?;
    t.set(2, 1, 2, 1, real(eps))?;
    t.set(2, 3, 2, 1, real((1.0 - eps * eps).sqrt()))?;
    t.set(3, 1, 3, 1, real(1.0))?;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub transfer_residual: f64,
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Violation budget for memories that an ideal transfer satisfied to
/// within `tol` must erase: `10·sqrt(tol)`, at least `1e-12`.
pub fn erasure_budget(tol: f64) -> f64 {
    (10.0 * tol.max(0.0).sqrt()).max(1e-12)
}

/// Checks every memory that must vanish when `spec` is transferred ideally.
///
/// Fails with [`Error::Precondition`] unless `t` satisfies the ideal
/// version of `spec` to within `tol`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn verify_ideal_theorems(t: &StinespringTensor, spec: &TransferSpec, tol: f64) -> Result<TheoremReport> {
    let ideal = spec.ideal();
    let residual = transfer_residual(t, &ideal)?;
    if !(residual <= tol) {
        return Err(Error::Precondition(format!(
            "ideal transfer residual {residual:e} exceeds {tol:e}"
        )));
    }
    let budget = erasure_budget(tol);
    let n = t.n();
    let mut checks = Vec::new();
    let mut push = |name: String, measured: f64| {
        checks.push(TheoremCheck { name, measured, threshold: budget, passed: measured <= budget });
    };
    for e in spec.elements() {
        match (spec.kind(), e.index) {
            (TransferKind::Diagonal, ElementIndex::Single(a)) => {
                for c in (1..=n).filter(|&c| c != a) {
                    push(format!("offdiag({a},{c})"), offdiag0(t, a - 1, c - 1));
                }
            }
            (kind, ElementIndex::Pair([a, b])) => {
                let (a0, b0) = (a - 1, b - 1);
                let re = || component0(t, a0, b0, ComponentKind::RealPart);
                let im = || component0(t, a0, b0, ComponentKind::ImaginaryPart);
                let dd = || diag_diff0(t, a0, b0);
                match kind {
                    TransferKind::Offdiagonal => {
                        push(format!("offdiag({a},{b})"), offdiag0(t, a0, b0));
                        push(format!("diag_diff({a},{b})"), dd());
                    }
                    TransferKind::RealPart => {
                        push(format!("im_part({a},{b})"), im());
                        push(format!("diag_diff({a},{b})"), dd());
                    }
                    TransferKind::ImaginaryPart => {
                        push(format!("re_part({a},{b})"), re());
                        push(format!("diag_diff({a},{b})"), dd());
                    }
                    TransferKind::DiagDifference => {
                        push(format!("re_part({a},{b})"), re());
                        push(format!("im_part({a},{b})"), im());
                    }
                    TransferKind::Diagonal => unreachable!("validated in TransferSpec::new"),
                }
            }
            (_, ElementIndex::Single(_)) => unreachable!("validated in TransferSpec::new"),
        }
    }
    Ok(TheoremReport { transfer_residual: residual, checks })
}
