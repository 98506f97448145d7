//! Closed-form reference data with known answers, shared by tests, benches
//! and the acceptance suite.
//!
//! * Example A — Case 2, `𝕳 = 𝕵 = 1`, `θ = π/2`: flat metric, `b = [[1, 1], [1, 1]]`.
//! * Example B — Case 1, `n = 3`, `C³ = 1`, `𝕳 = 1`, `𝕵 = √2`, `θ = π/2`, `s ∈ [1, 2]`;
//!   balanced by `𝕵² = 𝕳² + κ`.
//! * κ-violated — Case 1 with `κ = 1` but `𝕳 = 𝕵 = 1`: the Liouville constraint
//!   is off by exactly `2κ = 2`.
//! * Round 3-sphere of radius `R`, `b = g/R`.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use crate::bonnet::{BonnetFields, Case};
use crate::fieldcore::{Grid2, Grid3, SField, Sampling, ScalarField2};
use crate::tensorlab::{LinearFactor, TensorChart};

/// Unit square with `nodes` per axis.
pub fn unit_grid(nodes: usize) -> Grid2 {
    Grid2::square(0.0, 1.0, nodes).expect("fixture grid")
}

/// `σ ∈ [1, 2]` sampled at `layers` points.
pub fn sigma_sampling(grid: Grid2, layers: usize) -> Sampling {
    Sampling::grid3(&Grid3::new(grid, (1.0, 2.0, layers)).expect("fixture grid3"))
}

pub fn constant_fields(grid: Grid2, frak_h: f64, frak_j: f64, theta: f64, case: Case, n: usize) -> BonnetFields {
    let c = |v| ScalarField2::constant(grid, v).expect("finite constant");
    BonnetFields::new(c(frak_h), c(frak_j), c(theta), case, n).expect("fixture satisfies invariants")
}

fn case_one() -> Case {
    Case::One(LinearFactor::new(vec![1.0]).expect("C³ = 1"))
}

pub fn example_a(nodes: usize) -> BonnetFields {
    constant_fields(unit_grid(nodes), 1.0, 1.0, FRAC_PI_2, Case::Two, 3)
}

/// Example A with `𝕵 = −1`, hence `∈ = −1`.
pub fn example_a_mirrored(nodes: usize) -> BonnetFields {
    constant_fields(unit_grid(nodes), 1.0, -1.0, FRAC_PI_2, Case::Two, 3)
}

pub fn example_b(nodes: usize) -> BonnetFields {
    constant_fields(unit_grid(nodes), 1.0, SQRT_2, FRAC_PI_2, case_one(), 3)
}

pub fn kappa_violated(nodes: usize) -> BonnetFields {
    constant_fields(unit_grid(nodes), 1.0, 1.0, FRAC_PI_2, case_one(), 3)
}

/// Example A plus a smooth `1e−2` perturbation of every field that vanishes
/// at the corner node `(0, 0)`.
pub fn perturbed_example_a(nodes: usize) -> BonnetFields {
    let grid = unit_grid(nodes);
    let f = |g: fn(f64, f64) -> f64| ScalarField2::from_fn(grid, g).expect("finite perturbation");
    BonnetFields::new(
        f(|x, y| 1.0 + 1e-2 * (x + 2.0 * y).sin()),
        f(|x, y| 1.0 + 1e-2 * (x * y).sin() * (2.0 * x - y).cos()),
        f(|x, y| FRAC_PI_2 + 1e-2 * x.sin() * (1.0 + y).cos()),
        Case::Two,
        3,
    )
    .expect("fixture satisfies invariants")
}

/// Unit-width patch around the equator of both polar angles.
pub fn sphere_grid(nodes: usize) -> Grid2 {
    Grid2::square(FRAC_PI_2 - 0.5, FRAC_PI_2 + 0.5, nodes).expect("fixture grid")
}

/// `g = R²·diag(1, sin²x¹, sin²x¹ sin²x²)`, `b = g/R`.
pub fn sphere_chart(nodes: usize, radius: f64) -> TensorChart {
    let grid = sphere_grid(nodes);
    let f = |h: &(dyn Fn(f64, f64) -> f64 + Sync)| {
        SField::from_field(&ScalarField2::from_fn(grid, |x, y| radius * radius * h(x, y)).expect("finite"), 0)
    };
    let g = [f(&|_, _| 1.0), f(&|x, _| x.sin().powi(2)), f(&|x, y| x.sin().powi(2) * y.sin().powi(2))];
    let mut chart = TensorChart::zeros(3, grid, None).expect("n = 3");
    for (a, ga) in g.into_iter().enumerate() {
        chart.set_b(a, a, ga.scale(1.0 / radius));
        chart.set_g(a, a, ga);
    }
    chart
}
