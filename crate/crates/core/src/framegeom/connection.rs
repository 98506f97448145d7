use crate::fieldcore::{Axis, SField, Sampling, StencilOrder};
use crate::tensorlab::LinearFactor;

use super::GeomError;

/// Connection scalars of the bisecting frame in normalized coordinates
/// (`g11 = g22`, `g_pp = 1`):
/// `h = E₂(ln√g11)`, `h̄ = E₁(ln√g22)`, `T_p = C^p/s` (zero without a linear factor).
///
/// Also carries what the frame derivatives need: `1/√g11` and the `C^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionScalars {
    pub h: SField,
    pub hbar: SField,
    /// `T_p` for `p = 3..=n`.
    pub t: Vec<SField>,
    inv_sqrt_g: SField,
    c: Vec<f64>,
    order: StencilOrder,
}

impl ConnectionScalars {
    /// `E₁ f = ∂₁f / √g11`.
    pub fn e1(&self, f: &SField) -> Result<SField, GeomError> {
        Ok(&self.inv_sqrt_g * &f.d(Axis::X1, self.order)?)
    }

    /// `E₂ f = ∂₂f / √g22`.
    pub fn e2(&self, f: &SField) -> Result<SField, GeomError> {
        Ok(&self.inv_sqrt_g * &f.d(Axis::X2, self.order)?)
    }

    /// `E_p f = C^p ∂_s f` for `p = k + 3`.
    pub fn ep(&self, k: usize, f: &SField) -> SField {
        f.d_s().scale(self.c[k])
    }

    /// `C^p` for `p = 3..=n`.
    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn inv_sqrt_g(&self) -> &SField {
        &self.inv_sqrt_g
    }
}

pub fn connection_scalars(
    g11: &SField,
    linfac: Option<&LinearFactor>,
    n: usize,
    sampling: &Sampling,
) -> Result<ConnectionScalars, GeomError> {
    if n < 3 {
        return Err(GeomError::Invariant(format!("dimension {n} < 3")));
    }
    if let Some(lf) = linfac {
        if lf.r() > n {
            return Err(GeomError::Invariant(format!("linear factor reaches x^{} beyond n = {n}", lf.r())));
        }
    }
    let sqrt_g = g11.sqrt().map_err(|e| GeomError::Metric(format!("g11: {e}")))?;
    let inv_sqrt_g = sqrt_g.recip().map_err(|e| GeomError::Metric(format!("g11: {e}")))?;
    let (_, base) = sqrt_g.as_monomial().expect("sqrt yields a monomial");
    // ln√g11 = ln(base) + q ln s; the s part is invisible to E₁, E₂.
    let ln = SField::monomial(*g11.grid(), base.mapv(f64::ln), 0);
    let order = sampling.order;
    let h = &inv_sqrt_g * &ln.d(Axis::X2, order)?;
    let hbar = &inv_sqrt_g * &ln.d(Axis::X1, order)?;
    let c: Vec<f64> = (3..=n).map(|p| linfac.map_or(0.0, |l| l.coeff_for_index(p - 1))).collect();
    let t = c.iter().map(|&cp| SField::constant(*g11.grid(), cp, -1)).collect();
    Ok(ConnectionScalars { h, hbar, t, inv_sqrt_g, c, order })
}
