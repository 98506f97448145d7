use ndarray::{Array2, Zip};

use crate::bonnet::{BonnetError, InvariantKind, ADMISSIBLE_MIN};
use crate::fieldcore::{Axis, NormPair, ScalarField2, StencilOrder};

use super::SolveError;

/// Integrate `∇𝕳 = (−𝕵 θ₁/sin θ, 𝕵 θ₂/sin θ)` from `anchor = (i, j, value)`:
/// trapezoidal along the anchor's row in `x¹`, then along every column in `x²`.
///
/// Returns 𝕳 and the mixed-partial mismatch `∂₂(∂₁𝕳) − ∂₁(∂₂𝕳)` of the
/// prescribed gradient, which vanishes iff some 𝕳 exists. A mismatch above
/// `compat_tol` is an error.
pub fn integrate_mean_field(
    theta: &ScalarField2,
    frak_j: &ScalarField2,
    anchor: (usize, usize, f64),
    order: StencilOrder,
    compat_tol: f64,
) -> Result<(ScalarField2, NormPair), SolveError> {
    let grid = *theta.grid();
    if frak_j.grid() != &grid {
        return Err(BonnetError::invariant(InvariantKind::Grid, "θ and 𝕵 on different grids").into());
    }
    let (n1, n2) = grid.shape();
    let (ia, ja, value) = anchor;
    if ia >= n1 || ja >= n2 {
        return Err(SolveError::Config(format!("anchor node ({ia}, {ja}) outside {n1}×{n2} grid")));
    }
    if let Some(((i, j), t)) = theta.values().indexed_iter().find(|(_, t)| !(t.sin() >= ADMISSIBLE_MIN)) {
        return Err(
            BonnetError::invariant(InvariantKind::ThetaRange, format!("sin θ at node ({i}, {j}) for θ = {t}")).into()
        );
    }
    let t1 = theta.partial(Axis::X1, order)?;
    let t2 = theta.partial(Axis::X2, order)?;
    let p = Zip::from(frak_j.values()).and(t1.values()).and(theta.values()).map_collect(|j, d, t| -j * d / t.sin());
    let q = Zip::from(frak_j.values()).and(t2.values()).and(theta.values()).map_collect(|j, d, t| j * d / t.sin());

    let (h1, h2) = (grid.h1(), grid.h2());
    let mut h = Array2::zeros((n1, n2));
    h[[ia, ja]] = value;
    for i in ia + 1..n1 {
        h[[i, ja]] = h[[i - 1, ja]] + 0.5 * h1 * (p[[i - 1, ja]] + p[[i, ja]]);
    }
    for i in (0..ia).rev() {
        h[[i, ja]] = h[[i + 1, ja]] - 0.5 * h1 * (p[[i + 1, ja]] + p[[i, ja]]);
    }
    for i in 0..n1 {
        for j in ja + 1..n2 {
            h[[i, j]] = h[[i, j - 1]] + 0.5 * h2 * (q[[i, j - 1]] + q[[i, j]]);
        }
        for j in (0..ja).rev() {
            h[[i, j]] = h[[i, j + 1]] - 0.5 * h2 * (q[[i, j + 1]] + q[[i, j]]);
        }
    }

    let p = ScalarField2::new(grid, p)?;
    let q = ScalarField2::new(grid, q)?;
    let mismatch = p.partial(Axis::X2, order)?.values() - q.partial(Axis::X1, order)?.values();
    let compat = NormPair::from_values(mismatch.iter().copied()).unwrap_or_default();
    if !(compat.linf <= compat_tol) {
        return Err(SolveError::IncompatibleGradient { linf: compat.linf, tol: compat_tol });
    }
    Ok((ScalarField2::new(grid, h)?, compat))
}
