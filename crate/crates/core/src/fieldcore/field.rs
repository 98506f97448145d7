use ndarray::{Array2, Array3, Axis as NdAxis};
use serde::{Deserialize, Serialize};

pub use super::stencil::{Axis, StencilOrder};
use super::{stencil, FieldError, Grid2};
use crate::exec;

/// Real-valued field sampled on every node of a [`Grid2`]. Values are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2 {
    grid: Grid2,
    values: Array2<f64>,
}

impl ScalarField2 {
    pub fn new(grid: Grid2, values: Array2<f64>) -> Result<Self, FieldError> {
        if values.dim() != grid.shape() {
            return Err(FieldError::Shape(format!("values are {:?}, grid is {:?}", values.dim(), grid.shape())));
        }
        if let Some(((i, j), &value)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(FieldError::NonFinite { i, j, value });
        }
        Ok(ScalarField2 { grid, values })
    }

    pub fn constant(grid: Grid2, c: f64) -> Result<Self, FieldError> {
        Self::new(grid, Array2::from_elem(grid.shape(), c))
    }

    pub fn zeros(grid: Grid2) -> Self {
        ScalarField2 { grid, values: Array2::zeros(grid.shape()) }
    }

    /// Sample `f(x¹, x²)` on every node.
    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> f64 + Sync + Send) -> Result<Self, FieldError> {
        let values = exec::fill_nodes(grid.n1, grid.n2, |i, j| f(grid.x1(i), grid.x2(j)));
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    /// Apply `f` pointwise; fails if any output is non-finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, FieldError> {
        Self::new(self.grid, self.values.mapv(f))
    }

    /// First derivative along `axis`.
    pub fn partial(&self, axis: Axis, order: StencilOrder) -> Result<Self, FieldError> {
        let h = spacing(&self.grid, axis);
        Ok(ScalarField2 { grid: self.grid, values: stencil::first(&self.values, axis, h, order)? })
    }

    /// Second derivative along `axis` (compact stencil).
    pub fn second_partial(&self, axis: Axis) -> Result<Self, FieldError> {
        let h = spacing(&self.grid, axis);
        Ok(ScalarField2 { grid: self.grid, values: stencil::second(&self.values, axis, h)? })
    }
}

pub(crate) fn spacing(grid: &Grid2, axis: Axis) -> f64 {
    match axis {
        Axis::X1 => grid.h1(),
        Axis::X2 => grid.h2(),
    }
}

/// Max-norm and root-mean-square of a set of node values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormPair {
    pub linf: f64,
    pub l2: f64,
}

impl NormPair {
    pub const ZERO: NormPair = NormPair { linf: 0.0, l2: 0.0 };

    /// Accumulates in iteration order; callers pass nodes in a fixed order.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Option<NormPair> {
        let mut linf: f64 = 0.0;
        let mut sq = 0.0;
        let mut count = 0usize;
        for v in values {
            let a = v.abs();
            // NaN must poison the max rather than be skipped by f64::max.
            linf = if a.is_nan() || a > linf { a } else { linf };
            sq += a * a;
            count += 1;
        }
        (count > 0).then(|| NormPair { linf, l2: (sq / count as f64).sqrt() })
    }

    pub fn max(self, other: NormPair) -> NormPair {
        NormPair { linf: self.linf.max(other.linf), l2: self.l2.max(other.l2) }
    }
}

/// Norms of a field; `interior_only` drops the one-node boundary ring.
pub fn field_norms(field: &ScalarField2, interior_only: bool) -> Result<NormPair, FieldError> {
    norms_of(&field.values.view().insert_axis(NdAxis(2)).to_owned(), interior_only)
}

/// Norms over a stack of planes `(n1, n2, layers)`. Only the first two axes carry
/// a boundary ring; the third indexes exactly evaluated samples.
pub fn norms_of(a: &Array3<f64>, interior_only: bool) -> Result<NormPair, FieldError> {
    let (n1, n2, n3) = a.dim();
    let (lo, hi1, hi2) = if interior_only { (1, n1.saturating_sub(1), n2.saturating_sub(1)) } else { (0, n1, n2) };
    if hi1 <= lo || hi2 <= lo || n3 == 0 {
        return Err(FieldError::Domain(format!(
            "no nodes to reduce over ({n1}x{n2}x{n3}, interior_only={interior_only})"
        )));
    }
    let it = (lo..hi1).flat_map(|i| (lo..hi2).flat_map(move |j| (0..n3).map(move |k| a[[i, j, k]])));
    NormPair::from_values(it).ok_or_else(|| FieldError::Domain("empty".into()))
}
