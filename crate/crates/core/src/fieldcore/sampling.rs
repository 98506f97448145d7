use serde::{Deserialize, Serialize};

use super::{Grid3, StencilOrder};

/// Where s-dependent quantities are evaluated, and which stencil differentiates
/// along `x¹`, `x²`. Fields without `s` dependence use the single sample `s = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub sigmas: Vec<f64>,
    pub order: StencilOrder,
}

impl Sampling {
    pub fn plane() -> Self {
        Sampling { sigmas: vec![1.0], order: StencilOrder::Second }
    }

    pub fn grid3(grid: &Grid3) -> Self {
        Sampling { sigmas: grid.sigmas(), order: StencilOrder::Second }
    }

    pub fn with_order(mut self, order: StencilOrder) -> Self {
        self.order = order;
        self
    }
}
