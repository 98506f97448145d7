//! Finding generating data `(𝕳, 𝕵, θ)` that satisfy the master constraints.
//!
//! * [`integrate_mean_field`] — 𝕳 is fixed by its gradient up to a constant.
//! * [`reduce_1d_solve`] — profiles depending on `x¹` only.
//! * [`least_squares_solve`] — damped Gauss–Newton (Levenberg–Marquardt) on the
//!   stacked pointwise residuals, with a colored finite-difference Jacobian and
//!   a banded Cholesky solve of the normal equations.

mod banded;
mod integrate;
mod lsq;
mod reduce;

pub use integrate::integrate_mean_field;
pub use lsq::least_squares_solve;
pub use reduce::reduce_1d_solve;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bonnet::{BonnetError, BonnetFields};
use crate::exprlang::ExprError;
use crate::fieldcore::{FieldError, StencilOrder};

/// One of the three generating fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldId {
    #[serde(rename = "frakH")]
    FrakH,
    #[serde(rename = "frakJ")]
    FrakJ,
    #[serde(rename = "theta")]
    Theta,
}

impl FieldId {
    pub const ALL: [FieldId; 3] = [FieldId::FrakH, FieldId::FrakJ, FieldId::Theta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldId::FrakH => "frakH",
            FieldId::FrakJ => "frakJ",
            FieldId::Theta => "theta",
        }
    }
}

/// Gauge condition `field(x¹_i, x²_j) = value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub i: usize,
    pub j: usize,
    pub field: FieldId,
    pub value: f64,
}

/// Which nodes contribute constraint rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSet {
    /// Interior nodes only (centered stencils).
    #[default]
    Interior,
    /// Every node, one-sided stencils on the boundary ring.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Fields the solver may change; the rest stay as given in the initial data.
    pub unknowns: Vec<FieldId>,
    pub anchors: Vec<Anchor>,
    /// Target `linf` of the residual vector.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial Levenberg parameter (multiplies `diag JᵀJ`).
    pub damping: f64,
    pub order: StencilOrder,
    pub rows: RowSet,
}

impl SolveConfig {
    pub fn new(unknowns: Vec<FieldId>, anchors: Vec<Anchor>) -> Self {
        SolveConfig {
            unknowns,
            anchors,
            tol: 1e-8,
            max_iter: 50,
            damping: 1e-3,
            order: StencilOrder::Second,
            rows: RowSet::Interior,
        }
    }

    /// Anchors on every unknown field at node `(i, j)`, with the values the
    /// given fields take there.
    pub fn anchored_at(unknowns: Vec<FieldId>, fields: &BonnetFields, i: usize, j: usize) -> Self {
        let anchors =
            unknowns.iter().map(|&field| Anchor { i, j, field, value: field_of(fields, field).at(i, j) }).collect();
        SolveConfig::new(unknowns, anchors)
    }
}

pub(crate) fn field_of(f: &BonnetFields, id: FieldId) -> &crate::fieldcore::ScalarField2 {
    match id {
        FieldId::FrakH => f.frak_h(),
        FieldId::FrakJ => f.frak_j(),
        FieldId::Theta => f.theta(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub fields: BonnetFields,
    /// Residual `linf` before the first step and after every accepted step.
    pub history: Vec<f64>,
    /// Root-mean-square residual, same indexing as `history`.
    pub history_l2: Vec<f64>,
    pub converged: bool,
    /// Accepted steps.
    pub iterations: usize,
}

impl SolveResult {
    pub fn final_residual(&self) -> f64 {
        self.history.last().copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("unknown field {} has no anchor", .0.name())]
    NoAnchor(FieldId),
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("gradient of 𝕳 is not integrable: mixed-partial mismatch {linf:e} > {tol:e}")]
    IncompatibleGradient { linf: f64, tol: f64 },
    #[error("no progress: residual stalled at {:e} after {} iterations", .result.final_residual(), .result.iterations)]
    NoProgress { result: Box<SolveResult> },
    #[error("no step keeps |𝕳|, |𝕵|, sin θ admissible (residual {:e})", .result.final_residual())]
    InvariantBreach { result: Box<SolveResult> },
    #[error(transparent)]
    Bonnet(#[from] BonnetError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl SolveError {
    /// Machine-readable code for CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::NoAnchor(_) => "CONFIG_NO_ANCHOR",
            SolveError::Config(_) => "CONFIG_INVALID",
            SolveError::IncompatibleGradient { .. } => "INCOMPATIBLE_GRADIENT",
            SolveError::NoProgress { .. } => "NO_PROGRESS",
            SolveError::InvariantBreach { .. } => "INVARIANT_BREACH",
            SolveError::Bonnet(BonnetError::Invariant { kind, .. }) => kind.code(),
            SolveError::Bonnet(_) => "GEOMETRY",
            SolveError::Field(_) => "FIELD",
            SolveError::Expr(_) => "EXPRESSION",
        }
    }
}

#[cfg(test)]
mod tests;
