//! Observed order of accuracy of the finite-difference stencils.
//!
//! Each probe differentiates `f(x¹, x²) = sin(2x¹ + 1)·exp(x²/2)` on `[0, 1]²`
//! at 17, 33, 65 and 129 nodes per axis and fits `log(err) = p·log(h) + c`
//! by least squares.

use bonnetlab::fieldcore::{Axis, Grid2, ScalarField2, StencilOrder};

pub struct OrderFit {
    pub name: &'static str,
    pub nominal: f64,
    pub fitted: f64,
    pub errors: Vec<f64>,
}

impl OrderFit {
    /// Within 25 % of nominal.
    pub fn passes(&self) -> bool {
        (self.fitted - self.nominal).abs() <= 0.25 * self.nominal
    }
}

const NODES: [usize; 4] = [17, 33, 65, 129];

fn f(x: f64, y: f64) -> f64 {
    (2.0 * x + 1.0).sin() * (0.5 * y).exp()
}
fn f1(x: f64, y: f64) -> f64 {
    2.0 * (2.0 * x + 1.0).cos() * (0.5 * y).exp()
}
fn f2(x: f64, y: f64) -> f64 {
    0.5 * f(x, y)
}
fn f11(x: f64, y: f64) -> f64 {
    -4.0 * f(x, y)
}

/// Least-squares slope of `log e` against `log h`.
pub fn slope(hs: &[f64], es: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = hs.iter().zip(es).map(|(h, e)| (h.ln(), e.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Max error of `approx` against `exact` over nodes selected by `keep(i, j, n)`.
fn probe(
    name: &'static str,
    nominal: f64,
    approx: impl Fn(&ScalarField2) -> ScalarField2,
    exact: fn(f64, f64) -> f64,
    keep: impl Fn(usize, usize, usize) -> bool,
) -> OrderFit {
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for n in NODES {
        let grid = Grid2::square(0.0, 1.0, n).unwrap();
        let field = ScalarField2::from_fn(grid, f).unwrap();
        let d = approx(&field);
        let mut err: f64 = 0.0;
        for ((i, j), v) in d.values().indexed_iter() {
            if keep(i, j, n) {
                err = err.max((v - exact(grid.x1(i), grid.x2(j))).abs());
            }
        }
        hs.push(grid.h1());
        errors.push(err);
    }
    OrderFit { name, nominal, fitted: slope(&hs, &errors), errors }
}

pub fn order_fits() -> Vec<OrderFit> {
    let interior4 = |i: usize, j: usize, n: usize| i >= 2 && i + 2 < n && j >= 2 && j + 2 < n;
    let all = |_: usize, _: usize, _: usize| true;
    let boundary = |i: usize, _: usize, n: usize| i == 0 || i == n - 1;
    vec![
        probe("d/dx1 second order", 2.0, |u| u.partial(Axis::X1, StencilOrder::Second).unwrap(), f1, all),
        probe("d/dx2 second order", 2.0, |u| u.partial(Axis::X2, StencilOrder::Second).unwrap(), f2, all),
        probe("d/dx1 one-sided boundary", 2.0, |u| u.partial(Axis::X1, StencilOrder::Second).unwrap(), f1, boundary),
        probe(
            "d/dx1 fourth order interior",
            4.0,
            |u| u.partial(Axis::X1, StencilOrder::Fourth).unwrap(),
            f1,
            interior4,
        ),
        probe("d2/dx1^2 compact", 2.0, |u| u.second_partial(Axis::X1).unwrap(), f11, all),
    ]
}
