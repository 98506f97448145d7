//! Raw finite-difference stencils on node arrays.
//!
//! Interior nodes use centered differences; the boundary uses one-sided
//! second-order formulas, which are exact for quadratics.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::FieldError;
use crate::exec;

/// Coordinate axis of a 2D field: `X1` indexes rows, `X2` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StencilOrder {
    #[default]
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn as_usize(self) -> usize {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    /// Half-width of the centered stencil.
    pub fn radius(self) -> usize {
        self.as_usize() / 2
    }
}

fn line_len(a: &Array2<f64>, axis: Axis) -> usize {
    match axis {
        Axis::X1 => a.nrows(),
        Axis::X2 => a.ncols(),
    }
}

/// First derivative along `axis` with node spacing `h`.
pub fn first(a: &Array2<f64>, axis: Axis, h: f64, order: StencilOrder) -> Result<Array2<f64>, FieldError> {
    let n = line_len(a, axis);
    let need = match order {
        StencilOrder::Second => 3,
        StencilOrder::Fourth => 5,
    };
    if n < need {
        return Err(FieldError::Stencil { nodes: n, order: order.as_usize() });
    }
    let (n1, n2) = a.dim();
    let at = |i: usize, j: usize, m: usize| match axis {
        Axis::X1 => a[[m, j]],
        Axis::X2 => a[[i, m]],
    };
    Ok(exec::fill_nodes(n1, n2, |i, j| {
        let m = match axis {
            Axis::X1 => i,
            Axis::X2 => j,
        };
        let f = |k: usize| at(i, j, k);
        if m == 0 {
            (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h)
        } else if m == n - 1 {
            (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h)
        } else if order == StencilOrder::Fourth && m >= 2 && m + 2 < n {
            (f(m - 2) - 8.0 * f(m - 1) + 8.0 * f(m + 1) - f(m + 2)) / (12.0 * h)
        } else {
            (f(m + 1) - f(m - 1)) / (2.0 * h)
        }
    }))
}

/// Second derivative along `axis`: compact three-point stencil inside,
/// four-point one-sided second-order stencil on the boundary.
pub fn second(a: &Array2<f64>, axis: Axis, h: f64) -> Result<Array2<f64>, FieldError> {
    let n = line_len(a, axis);
    if n < 4 {
        return Err(FieldError::Stencil { nodes: n, order: 2 });
    }
    let (n1, n2) = a.dim();
    let h2 = h * h;
    Ok(exec::fill_nodes(n1, n2, |i, j| {
        let m = match axis {
            Axis::X1 => i,
            Axis::X2 => j,
        };
        let f = |k: usize| match axis {
            Axis::X1 => a[[k, j]],
            Axis::X2 => a[[i, k]],
        };
        if m == 0 {
            (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2
        } else if m == n - 1 {
            (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2
        } else {
            (f(m + 1) - 2.0 * f(m) + f(m - 1)) / h2
        }
    }))
}
