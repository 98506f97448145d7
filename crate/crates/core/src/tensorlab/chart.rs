use crate::fieldcore::{Axis, Grid2, SField, StencilOrder};

use super::{LinearFactor, TensorError, MAX_DIM};

/// First and second fundamental tensors `(g_AB, b_AB)` of an `n`-dimensional
/// hypersurface in an orthogonal chart, as s-fields on the `(x¹, x²)` grid.
/// Indices are 0-based: `0, 1` are `x¹, x²`; `2..n` are the transverse `x^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorChart {
    n: usize,
    grid: Grid2,
    linfac: Option<LinearFactor>,
    g: Vec<SField>,
    b: Vec<SField>,
}

impl TensorChart {
    /// Chart with `g = 0`, `b = 0`; fill it with the setters.
    pub fn zeros(n: usize, grid: Grid2, linfac: Option<LinearFactor>) -> Result<Self, TensorError> {
        if !(3..=MAX_DIM).contains(&n) {
            return Err(TensorError::Dimension(n));
        }
        if let Some(l) = &linfac {
            if l.r() > n {
                return Err(TensorError::LinearFactor(format!("r = {} exceeds n = {n}", l.r())));
            }
        }
        let z = SField::zero(grid);
        Ok(TensorChart { n, grid, linfac, g: vec![z.clone(); n * n], b: vec![z; n * n] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn linfac(&self) -> Option<&LinearFactor> {
        self.linfac.as_ref()
    }

    pub fn g(&self, a: usize, b: usize) -> &SField {
        &self.g[a * self.n + b]
    }

    pub fn b(&self, a: usize, b: usize) -> &SField {
        &self.b[a * self.n + b]
    }

    /// Set `g_ab = g_ba`.
    pub fn set_g(&mut self, a: usize, b: usize, f: SField) {
        assert_eq!(f.grid(), &self.grid, "component grid mismatch");
        self.g[b * self.n + a] = f.clone();
        self.g[a * self.n + b] = f;
    }

    /// Set `b_ab = b_ba`.
    pub fn set_b(&mut self, a: usize, b: usize, f: SField) {
        assert_eq!(f.grid(), &self.grid, "component grid mismatch");
        self.b[b * self.n + a] = f.clone();
        self.b[a * self.n + b] = f;
    }

    /// `∂_a f`: finite differences along `x¹`, `x²`; `C^p ∂_s` transversally.
    pub fn partial(&self, f: &SField, a: usize, order: StencilOrder) -> Result<SField, TensorError> {
        Ok(match a {
            0 => f.d(Axis::X1, order)?,
            1 => f.d(Axis::X2, order)?,
            _ => {
                let c = self.linfac.as_ref().map_or(0.0, |l| l.coeff_for_index(a));
                if c == 0.0 {
                    SField::zero(self.grid)
                } else {
                    f.d_s().scale(c)
                }
            }
        })
    }

    /// `∂_a ∂_b f`. Repeated planar axes use the compact second difference so the
    /// result stays second order up to the boundary.
    pub fn second_partial(&self, f: &SField, a: usize, b: usize, order: StencilOrder) -> Result<SField, TensorError> {
        let (a, b) = (a.min(b), a.max(b));
        Ok(match (a, b) {
            (0, 0) => f.d2(Axis::X1)?,
            (1, 1) => f.d2(Axis::X2)?,
            (0, 1) => f.d(Axis::X1, order)?.d(Axis::X2, order)?,
            (_, b) => {
                let inner = self.partial(f, a, order)?;
                self.partial(&inner, b, order)?
            }
        })
    }

    /// Diagonal metric components and their reciprocals. Errors unless the chart is
    /// orthogonal with positive monomial diagonal entries.
    pub(crate) fn diagonal_metric(&self) -> Result<(Vec<SField>, Vec<SField>), TensorError> {
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && !self.g(a, b).terms().all(|(_, base)| base.iter().all(|&v| v == 0.0)) {
                    return Err(TensorError::Metric(format!("g_{}{} != 0: chart is not orthogonal", a + 1, b + 1)));
                }
            }
        }
        let mut diag = Vec::with_capacity(self.n);
        let mut inv = Vec::with_capacity(self.n);
        for a in 0..self.n {
            let gaa = self.g(a, a);
            let (_, base) = gaa
                .as_monomial()
                .ok_or_else(|| TensorError::Metric(format!("g_{0}{0} is not a monomial in s", a + 1)))?;
            if let Some(((i, j), v)) = base.indexed_iter().find(|(_, v)| v.is_nan() || **v <= 0.0) {
                return Err(TensorError::Metric(format!("g_{0}{0} = {v} <= 0 at node ({i}, {j})", a + 1)));
            }
            inv.push(gaa.recip()?);
            diag.push(gaa.clone());
        }
        Ok((diag, inv))
    }
}
