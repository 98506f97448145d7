//! General-tensor machinery in an orthogonal chart: Christoffel symbols,
//! Riemann curvature, the Gauss and Codazzi residuals, principal curvatures,
//! A-net detection and the coordinate rescaling.
//!
//! All quantities live on the effective three-axis domain `(x¹, x², s)`:
//! a chart component depends on the transverse coordinates `x³..xⁿ` only
//! through the linear factor `s = Σ C^p x^p`, so `∂/∂x^p = C^p ∂/∂s`.

mod anet;
mod chart;
mod curvature;
mod fundamental;
mod linfac;
mod principal;
mod rescale;

pub use anet::{detect_anet, AnetDiagnostic, AnetVerdict};
pub use chart::TensorChart;
pub use curvature::{
    christoffel, codazzi_general_residual, first_bianchi_residual, gauss_general_residual, riemann, Christoffel,
    Riemann,
};
pub use fundamental::{FundamentalData, SeparableComponent};
pub use linfac::LinearFactor;
pub use principal::{principal_curvatures, PrincipalCurvatures, NULL_EIGEN_REL_TOL};
pub use rescale::{rescale_coordinates, AxisMap, Rescaled, TransverseProfile};

use thiserror::Error;

use crate::fieldcore::FieldError;

/// Dense index loops are capped at this hypersurface dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("metric error: {0}")]
    Metric(String),
    #[error("degenerate metric at node ({i}, {j}, s={s})")]
    DegenerateMetric { i: usize, j: usize, s: f64 },
    #[error("invalid linear factor: {0}")]
    LinearFactor(String),
    #[error("dimension {0} outside 3..={MAX_DIM}")]
    Dimension(usize),
    #[error("g11/a and g22/b differ by {deviation:e} (tolerance {tol:e})")]
    Ratio { deviation: f64, tol: f64 },
    #[error("positivity violated: {0}")]
    Positivity(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Expr(#[from] crate::exprlang::ExprError),
}
