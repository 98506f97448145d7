use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{TensorChart, TensorError};

/// Eigenvalues with `|λ| ≤ NULL_EIGEN_REL_TOL · max|λ|` count as zero.
pub const NULL_EIGEN_REL_TOL: f64 = 1e-8;

/// Spectrum of the shape operator `g⁻¹b` at one node.
///
/// `k1 ≥ k2` are the two eigenvalues of largest magnitude, `h = (k1 + k2)/2`
/// (not `trace / n`) and `j = (k1 − k2)/2 ≥ 0`. The sign convention that
/// attaches a sign to `J` lives in the frame scalars, not here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvatures {
    /// All `n` eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub k1: f64,
    pub k2: f64,
    pub h: f64,
    pub j: f64,
    /// Eigenvalues that vanish under the relative threshold.
    pub null_count: usize,
    /// At least `n − 2` eigenvalues vanish (rank of the shape operator ≤ 2).
    pub rank_at_most_two: bool,
    /// `k1 = k2` within the relative threshold.
    pub umbilic: bool,
}

/// Principal curvatures at node `(i, j)` and linear-factor value `s`.
pub fn principal_curvatures(
    chart: &TensorChart,
    i: usize,
    j: usize,
    s: f64,
) -> Result<PrincipalCurvatures, TensorError> {
    let n = chart.n();
    let g: Vec<f64> = (0..n).map(|a| chart.g(a, a).eval(i, j, s)).collect();
    if g.iter().any(|v| v.is_nan() || *v <= 0.0) {
        return Err(TensorError::DegenerateMetric { i, j, s });
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && chart.g(a, b).eval(i, j, s) != 0.0 {
                return Err(TensorError::Metric("principal curvatures need an orthogonal chart".into()));
            }
        }
    }
    let scaled = |a: usize, b: usize| chart.b(a, b).eval(i, j, s) / (g[a] * g[b]).sqrt();
    let block_sparse = (0..n).all(|a| (0..n).all(|b| (a < 2 && b < 2) || chart.b(a, b).eval(i, j, s) == 0.0));

    let mut block_pair = None;
    let mut eigenvalues: Vec<f64> = if block_sparse {
        let (p, q, c) = (scaled(0, 0), scaled(1, 1), scaled(0, 1));
        let m = 0.5 * (p + q);
        let r = (0.5 * (p - q)).hypot(c);
        block_pair = Some((m + r, m - r));
        let mut v = vec![m + r, m - r];
        v.resize(n, 0.0);
        v
    } else {
        let sym = DMatrix::from_fn(n, n, |a, b| 0.5 * (scaled(a, b) + scaled(b, a)));
        sym.symmetric_eigen().eigenvalues.iter().copied().collect()
    };
    eigenvalues.sort_by(|a, b| b.total_cmp(a));

    let max_abs = eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let thresh = NULL_EIGEN_REL_TOL * max_abs;
    let null_count = eigenvalues.iter().filter(|v| v.abs() <= thresh).count();

    let (k1, k2) = if let Some(pair) = block_pair {
        pair
    } else {
        let mut by_mag = eigenvalues.clone();
        by_mag.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        let (x, y) = (by_mag[0], by_mag[1]);
        (x.max(y), x.min(y))
    };
    let h = 0.5 * (k1 + k2);
    let jv = 0.5 * (k1 - k2);
    Ok(PrincipalCurvatures {
        eigenvalues,
        k1,
        k2,
        h,
        j: jv,
        null_count,
        rank_at_most_two: null_count + 2 >= n,
        umbilic: jv <= thresh,
    })
}
