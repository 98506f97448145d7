use crate::bonnet::{constraint_residuals, BonnetFields, Case, ConstraintResiduals};
use crate::exprlang::{sample, Expr, Var};
use crate::fieldcore::{Grid2, StencilOrder};

use super::{integrate_mean_field, SolveError};

/// Profiles `θ(x¹)`, `𝕵(x¹)` broadcast along `x²`, with `𝕳′ = −𝕵 θ′/sin θ`
/// integrated from `𝕳(x¹₀) = anchor`.
///
/// The second constraint is not enforced: the returned residuals show how far
/// the chosen profiles are from a solution, and the fields can seed
/// [`least_squares_solve`](super::least_squares_solve).
pub fn reduce_1d_solve(
    theta_profile: &Expr,
    frak_j_profile: &Expr,
    anchor: f64,
    case: Case,
    n: usize,
    grid: &Grid2,
    order: StencilOrder,
) -> Result<(BonnetFields, ConstraintResiduals), SolveError> {
    for (name, e) in [("θ", theta_profile), ("𝕵", frak_j_profile)] {
        if !e.is_free_of(Var::X2) {
            return Err(SolveError::Config(format!("{name} profile depends on x2")));
        }
    }
    let theta = sample(theta_profile, grid)?;
    let frak_j = sample(frak_j_profile, grid)?;
    // x¹-only data: the mixed-partial mismatch vanishes identically.
    let (frak_h, _) = integrate_mean_field(&theta, &frak_j, (0, 0, anchor), order, f64::INFINITY)?;
    let fields = BonnetFields::new(frak_h, frak_j, theta, case, n)?;
    let residuals = constraint_residuals(&fields, order)?;
    Ok((fields, residuals))
}
