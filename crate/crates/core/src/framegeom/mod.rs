//! Frame-level scalars of a hypersurface with two non-vanishing principal
//! curvatures, in the frame bisecting the principal directions of a pair
//! `M`, `M′`, and the reduced Codazzi, Gauss and `ln|t|` systems they obey.
//!
//! Frame derivatives are `E₁ = ∂₁/√g11`, `E₂ = ∂₂/√g22` (finite differences
//! on the base fields) and `E_p = C^p ∂_s` (exact, via the power rule).

mod connection;
mod frame;
mod residuals;

pub use connection::{connection_scalars, ConnectionScalars};
pub use frame::{
    bisector_shape_operators, frame_scalars, frame_scalars_at, principal_from_frame, principal_from_frame_at,
    FrameScalars, PrincipalData,
};
pub use residuals::{codazzi_reduced_residuals, gauss_reduced_residuals, log_t_compatibility};

use thiserror::Error;

use crate::fieldcore::FieldError;

/// `|H|`, `|J|` below this declare the patch inadmissible.
pub const ADMISSIBLE_MIN: f64 = 1e-9;
/// `|t|` below this makes `ln|t|` meaningless.
pub const VANISHING_T: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("umbilic point at node ({i}, {j}): |J| = {value:e}")]
    Umbilic { i: usize, j: usize, value: f64 },
    #[error("metric error: {0}")]
    Metric(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("t vanishes at node ({i}, {j}): |t| = {value:e}")]
    VanishingT { i: usize, j: usize, value: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[cfg(test)]
mod tests;
