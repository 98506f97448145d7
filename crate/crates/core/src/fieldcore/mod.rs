//! Uniform grids, scalar fields, finite-difference derivatives and norms.

mod csv;
mod field;
mod grid;
mod sampling;
mod sfield;
pub mod stencil;

pub use csv::{format_value, read_grid_csv, write_grid_csv, GridCsv};
pub use field::{field_norms, norms_of, Axis, NormPair, ScalarField2, StencilOrder};
pub use grid::{grid_refine, Grid2, Grid3};
pub use sampling::Sampling;
pub use sfield::{max_abs_samples, SField};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("grid invalid: {0}")]
    InvalidGrid(String),
    #[error("grid with {nodes} nodes along an axis is too small for a stencil of order {order}")]
    Stencil { nodes: usize, order: usize },
    #[error("refined node count overflows")]
    Capacity,
    #[error("empty domain: {0}")]
    Domain(String),
    #[error("non-finite value {value} at node ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("csv: {0}")]
    Csv(String),
}
