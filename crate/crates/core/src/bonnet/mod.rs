//! Bonnet pairs from generating data `(𝕳, 𝕵, θ)`: the fundamental tensors of
//! `M` and its associate `M′`, the master constraints that make them a
//! hypersurface, and the A-net round trip.
//!
//! Case 1 (`T_p ≠ 0`) scales everything by the linear factor `s = Σ C^p x^p`:
//! `H = 𝕳/s`, `J = 𝕵/s`, `g11 = g22 = s²/(|𝕵| sin θ)`. Case 2 sets `s ≡ 1`, `κ = 0`.

mod constraints;
mod construct;
mod fields;
mod verify;

pub use constraints::{constraint_fields, constraint_residuals, ConstraintResiduals};
pub use construct::{associate, construct_pair, frame_data, FundamentalPair, Variant};
pub use fields::{BonnetFields, Case, ADMISSIBLE_MIN};
pub use verify::{check_suite, theorem_roundtrip, verify_pair};

use thiserror::Error;

use crate::fieldcore::FieldError;
use crate::framegeom::GeomError;
use crate::tensorlab::TensorError;

/// Which precondition of the generating data failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    /// `|𝕳|` too small: the hypersurface would be minimal somewhere.
    MinimalH,
    /// `|𝕵|` too small: umbilic points.
    VanishingJ,
    /// `𝕵` changes sign, so `∈ = sgn 𝕵` is not defined.
    JSignChange,
    /// `θ ∉ (0, π)` or `sin θ` too small.
    ThetaRange,
    /// Dimension or linear-factor shape.
    Dimension,
    /// Fields on different grids.
    Grid,
}

impl InvariantKind {
    /// Machine-readable code used in CLI error reports.
    pub fn code(self) -> &'static str {
        match self {
            InvariantKind::MinimalH => "INVARIANT_H_ZERO",
            InvariantKind::VanishingJ => "INVARIANT_J_ZERO",
            InvariantKind::JSignChange => "INVARIANT_J_SIGN",
            InvariantKind::ThetaRange => "INVARIANT_THETA_RANGE",
            InvariantKind::Dimension => "INVARIANT_DIMENSION",
            InvariantKind::Grid => "INVARIANT_GRID",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BonnetError {
    #[error("{}: {detail}", kind.code())]
    Invariant { kind: InvariantKind, detail: String },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl BonnetError {
    pub(crate) fn invariant(kind: InvariantKind, detail: impl Into<String>) -> Self {
        BonnetError::Invariant { kind, detail: detail.into() }
    }
}
