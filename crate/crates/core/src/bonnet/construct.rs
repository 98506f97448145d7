use ndarray::{Array2, Zip};

use crate::fieldcore::{SField, Sampling, ScalarField2};
use crate::framegeom::{connection_scalars, ConnectionScalars, FrameScalars};
use crate::tensorlab::{FundamentalData, SeparableComponent};

use super::{BonnetError, BonnetFields};

/// How `b11`, `b22` are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// `b11 = s(𝕳 + 𝕵 cos θ)/(|𝕵| sin θ)`, i.e. `b11 = g11·k` with `k = H + J cos θ`.
    #[default]
    DerivationConsistent,
    /// `sin θ` in place of `cos θ` in the numerators. Kept only so the oracle
    /// can show it is not integrable.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalPair {
    pub m: FundamentalData,
    pub m_prime: FundamentalData,
    pub provenance: BonnetFields,
}

fn component(
    grid: crate::fieldcore::Grid2,
    values: Array2<f64>,
    s_power: i32,
) -> Result<SeparableComponent, BonnetError> {
    Ok(SeparableComponent::new(ScalarField2::new(grid, values)?, s_power)?)
}

pub fn construct_pair(f: &BonnetFields, variant: Variant) -> Result<FundamentalPair, BonnetError> {
    let grid = *f.grid();
    let p = f.case().s_power();
    let eps = f.epsilon();
    let shape = grid.shape();
    let (mut g11, mut b11, mut b22) = (Array2::zeros(shape), Array2::zeros(shape), Array2::zeros(shape));
    Zip::from(&mut g11)
        .and(&mut b11)
        .and(&mut b22)
        .and(f.frak_h().values())
        .and(f.frak_j().values())
        .and(f.theta().values())
        .for_each(|g, b1, b2, &hh, &jj, &th| {
            let (sin, cos) = th.sin_cos();
            let xi = 1.0 / (jj.abs() * sin);
            let tilt = match variant {
                Variant::DerivationConsistent => cos,
                Variant::AsPrinted => sin,
            };
            *g = xi;
            *b1 = (hh + jj * tilt) * xi;
            *b2 = (hh - jj * tilt) * xi;
        });
    let b12 = Array2::from_elem(shape, eps);
    let m = FundamentalData {
        n: f.n(),
        linfac: f.case().linfac().cloned(),
        g11: component(grid, g11, 2 * p)?,
        b11: component(grid, b11, p)?,
        b22: component(grid, b22, p)?,
        b12: component(grid, b12, p)?,
        epsilon: eps,
    };
    let m_prime = associate(&m);
    Ok(FundamentalPair { m, m_prime, provenance: f.clone() })
}

/// The associate: same metric and `b11`, `b22`; `b12` and `∈` negated.
pub fn associate(m: &FundamentalData) -> FundamentalData {
    FundamentalData { b12: m.b12.negated(), epsilon: -m.epsilon, ..m.clone() }
}

/// Frame and connection scalars read off the tensors: `k = b11/g11`,
/// `k̄ = b22/g22`, `t = b12/g11` in the orthonormal frame `∂_a/√g_aa`.
pub fn frame_data(fd: &FundamentalData, sampling: &Sampling) -> Result<(FrameScalars, ConnectionScalars), BonnetError> {
    let g = fd.g11.to_sfield();
    let inv = g.recip()?;
    let norm = |c: &SeparableComponent| -> SField { &c.to_sfield() * &inv };
    let fs = FrameScalars { k: norm(&fd.b11), kbar: norm(&fd.b22), t: norm(&fd.b12) };
    let cs = connection_scalars(&g, fd.linfac.as_ref(), fd.n, sampling)?;
    Ok((fs, cs))
}
