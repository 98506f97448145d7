//! Rescaling `x̄¹ = ∫√a dx¹`, `x̄² = ∫√b dx²`, `x̄^p = ∫√c^p dx^p` that brings a
//! metric with `g11/a(x¹) = g22/b(x²)` and `g_pp = c^p(x^p)` to `ḡ11 = ḡ22`, `ḡ_pp = 1`.

use ndarray::Array2;

use crate::exprlang::{evaluate, Expr, Var};
use crate::fieldcore::{Grid2, ScalarField2};

use super::TensorError;

/// Node map `x ↦ x̄` along one axis; `x̄` starts at `x[0]` so that `a ≡ 1` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisMap {
    pub x: Vec<f64>,
    pub x_bar: Vec<f64>,
}

/// A transverse coefficient `c^p(x^p)` written with `x1` as the placeholder
/// variable, sampled on `[lo, hi]` with `n` nodes.
#[derive(Debug, Clone)]
pub struct TransverseProfile {
    pub c: Expr,
    pub range: (f64, f64, usize),
}

#[derive(Debug, Clone)]
pub struct Rescaled {
    pub map1: AxisMap,
    pub map2: AxisMap,
    /// `ḡ11 = g11/a` and `ḡ22 = g22/b` at the original nodes (non-uniform in `x̄`).
    pub g11_bar: Array2<f64>,
    pub g22_bar: Array2<f64>,
    pub transverse: Vec<(AxisMap, Vec<f64>)>,
    /// `ḡ11`, `ḡ22` bilinearly resampled onto a uniform grid in `(x̄¹, x̄²)`.
    pub uniform_g11: ScalarField2,
    pub uniform_g22: ScalarField2,
}

fn profile(expr: &Expr, var: Var, xs: &[f64], what: &str) -> Result<Vec<f64>, TensorError> {
    let other = match var {
        Var::X1 => Var::X2,
        Var::X2 => Var::X1,
    };
    if !expr.is_free_of(other) {
        return Err(TensorError::Positivity(format!("{what} must depend on a single coordinate")));
    }
    xs.iter()
        .map(|&x| {
            let v = match var {
                Var::X1 => evaluate(expr, x, 0.0)?,
                Var::X2 => evaluate(expr, 0.0, x)?,
            };
            if v <= 0.0 {
                return Err(TensorError::Positivity(format!("{what} = {v} <= 0 at {x}")));
            }
            Ok(v)
        })
        .collect()
}

fn cumulative_sqrt(x: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = x[0];
    out.push(acc);
    for k in 1..x.len() {
        acc += 0.5 * (f[k - 1].sqrt() + f[k].sqrt()) * (x[k] - x[k - 1]);
        out.push(acc);
    }
    out
}

// Position of `t` in the increasing `xs` as (cell, weight).
fn locate(xs: &[f64], t: f64) -> (usize, f64) {
    let n = xs.len();
    let k = xs.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
    let w = ((t - xs[k]) / (xs[k + 1] - xs[k])).clamp(0.0, 1.0);
    (k, w)
}

fn bilinear(values: &Array2<f64>, xs: &[f64], ys: &[f64], grid: &Grid2) -> Array2<f64> {
    Array2::from_shape_fn(grid.shape(), |(i, j)| {
        let (ki, wi) = locate(xs, grid.x1(i));
        let (kj, wj) = locate(ys, grid.x2(j));
        let v00 = values[[ki, kj]];
        let v10 = values[[ki + 1, kj]];
        let v01 = values[[ki, kj + 1]];
        let v11 = values[[ki + 1, kj + 1]];
        (1.0 - wi) * ((1.0 - wj) * v00 + wj * v01) + wi * ((1.0 - wj) * v10 + wj * v11)
    })
}

/// `a` is an expression in `x1`, `b` in `x2`. `rel_tol` bounds the relative
/// mismatch `|g11/a − g22/b| / max(|g11/a|, |g22/b|)`.
pub fn rescale_coordinates(
    g11: &ScalarField2,
    g22: &ScalarField2,
    a: &Expr,
    b: &Expr,
    transverse: &[TransverseProfile],
    rel_tol: f64,
) -> Result<Rescaled, TensorError> {
    let grid = *g11.grid();
    if g22.grid() != &grid {
        return Err(TensorError::Metric("g11 and g22 live on different grids".into()));
    }
    if g11.values().iter().chain(g22.values().iter()).any(|&v| v <= 0.0) {
        return Err(TensorError::Positivity("metric components must be positive".into()));
    }
    let x1: Vec<f64> = (0..grid.n1).map(|i| grid.x1(i)).collect();
    let x2: Vec<f64> = (0..grid.n2).map(|j| grid.x2(j)).collect();
    let av = profile(a, Var::X1, &x1, "a(x1)")?;
    let bv = profile(b, Var::X2, &x2, "b(x2)")?;

    let g11_bar = Array2::from_shape_fn(grid.shape(), |(i, j)| g11.at(i, j) / av[i]);
    let g22_bar = Array2::from_shape_fn(grid.shape(), |(i, j)| g22.at(i, j) / bv[j]);
    let deviation =
        g11_bar.iter().zip(g22_bar.iter()).map(|(p, q)| (p - q).abs() / p.abs().max(q.abs())).fold(0.0, f64::max);
    if deviation > rel_tol {
        return Err(TensorError::Ratio { deviation, tol: rel_tol });
    }

    let map1 = AxisMap { x_bar: cumulative_sqrt(&x1, &av), x: x1 };
    let map2 = AxisMap { x_bar: cumulative_sqrt(&x2, &bv), x: x2 };

    let mut maps = Vec::with_capacity(transverse.len());
    for (k, tp) in transverse.iter().enumerate() {
        let (lo, hi, n) = tp.range;
        if n < 2 || !(hi > lo) {
            return Err(TensorError::Metric(format!("bad range for transverse axis {}", k + 3)));
        }
        let xs: Vec<f64> =
            (0..n).map(|m| if m + 1 == n { hi } else { lo + (hi - lo) * (m as f64 / (n - 1) as f64) }).collect();
        let cv = profile(&tp.c, Var::X1, &xs, &format!("c^{}", k + 3))?;
        // g_pp = c^p, so the rescaled component is c^p / c^p.
        #[allow(clippy::eq_op)]
        let g_bar = cv.iter().map(|c| c / c).collect();
        maps.push((AxisMap { x_bar: cumulative_sqrt(&xs, &cv), x: xs }, g_bar));
    }

    let ugrid = Grid2::new(
        (map1.x_bar[0], *map1.x_bar.last().unwrap(), grid.n1),
        (map2.x_bar[0], *map2.x_bar.last().unwrap(), grid.n2),
    )?;
    let uniform_g11 = ScalarField2::new(ugrid, bilinear(&g11_bar, &map1.x_bar, &map2.x_bar, &ugrid))?;
    let uniform_g22 = ScalarField2::new(ugrid, bilinear(&g22_bar, &map1.x_bar, &map2.x_bar, &ugrid))?;

    Ok(Rescaled { map1, map2, g11_bar, g22_bar, transverse: maps, uniform_g11, uniform_g22 })
}
