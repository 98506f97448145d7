use ndarray::Zip;

use crate::fieldcore::{Axis, ScalarField2, StencilOrder};
use crate::report::{ResidualEntry, ResidualReport};

use super::{BonnetError, BonnetFields};

/// Pointwise residuals of the master constraints
///
/// ```text
/// c1 = 𝕳₂/𝕵 − θ₂/sin θ
/// c2 = 𝕳₁/𝕵 + θ₁/sin θ
/// c3 = u Δ ln u − 2κ − 2(𝕳² − 𝕵²),   u = |𝕵| sin θ
/// ```
///
/// No invariant checks: the solver evaluates trial fields with this.
pub fn constraint_fields(
    frak_h: &ScalarField2,
    frak_j: &ScalarField2,
    theta: &ScalarField2,
    kappa: f64,
    order: StencilOrder,
) -> Result<[ScalarField2; 3], BonnetError> {
    let grid = *frak_h.grid();
    let u =
        ScalarField2::new(grid, Zip::from(frak_j.values()).and(theta.values()).map_collect(|j, t| j.abs() * t.sin()))?;
    let ln_u = u.map(f64::ln)?;
    let h1 = frak_h.partial(Axis::X1, order)?;
    let h2 = frak_h.partial(Axis::X2, order)?;
    let t1 = theta.partial(Axis::X1, order)?;
    let t2 = theta.partial(Axis::X2, order)?;
    let lap = ln_u.second_partial(Axis::X1)?.values() + ln_u.second_partial(Axis::X2)?.values();

    let c1 = Zip::from(h2.values())
        .and(t2.values())
        .and(frak_j.values())
        .and(theta.values())
        .map_collect(|h2, t2, j, t| h2 / j - t2 / t.sin());
    let c2 = Zip::from(h1.values())
        .and(t1.values())
        .and(frak_j.values())
        .and(theta.values())
        .map_collect(|h1, t1, j, t| h1 / j + t1 / t.sin());
    let c3 = Zip::from(u.values())
        .and(&lap)
        .and(frak_h.values())
        .and(frak_j.values())
        .map_collect(|u, lap, h, j| u * lap - 2.0 * kappa - 2.0 * (h * h - j * j));
    Ok([ScalarField2::new(grid, c1)?, ScalarField2::new(grid, c2)?, ScalarField2::new(grid, c3)?])
}

/// `c1`, `c2` (the two gradient equations for 𝕳) and `c3` (the Liouville-type
/// equation for `ln(|𝕵| sin θ)`), each with full and interior norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintResiduals {
    pub c1: ResidualEntry,
    pub c2: ResidualEntry,
    pub c3: ResidualEntry,
}

impl ConstraintResiduals {
    pub fn report(&self) -> ResidualReport {
        let mut r = ResidualReport::new();
        for e in [&self.c1, &self.c2, &self.c3] {
            r.push(e.clone());
        }
        r
    }
}

pub fn constraint_residuals(f: &BonnetFields, order: StencilOrder) -> Result<ConstraintResiduals, BonnetError> {
    let [c1, c2, c3] = constraint_fields(f.frak_h(), f.frak_j(), f.theta(), f.case().kappa(), order)?;
    let entry = |name: &str, c: ScalarField2| {
        let grid = *c.grid();
        let a = c.into_values().insert_axis(ndarray::Axis(2));
        ResidualEntry::from_samples(name, "constraints", &grid, &a)
    };
    Ok(ConstraintResiduals { c1: entry("c1", c1), c2: entry("c2", c2), c3: entry("c3", c3) })
}
