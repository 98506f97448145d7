use crate::fieldcore::{Grid2, SField, ScalarField2};

use super::{LinearFactor, TensorChart, TensorError};

/// `base(x¹, x²) · s^{s_power}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableComponent {
    pub base: ScalarField2,
    pub s_power: i32,
}

impl SeparableComponent {
    pub const MAX_POWER: i32 = 2;

    pub fn new(base: ScalarField2, s_power: i32) -> Result<Self, TensorError> {
        if s_power.abs() > Self::MAX_POWER {
            return Err(TensorError::Metric(format!("s-power {s_power} outside [-2, 2]")));
        }
        Ok(SeparableComponent { base, s_power })
    }

    pub fn eval(&self, i: usize, j: usize, s: f64) -> f64 {
        self.base.at(i, j) * s.powi(self.s_power)
    }

    pub fn to_sfield(&self) -> SField {
        SField::from_field(&self.base, self.s_power)
    }

    pub fn negated(&self) -> Self {
        let base = ScalarField2::new(*self.base.grid(), -self.base.values()).expect("negation keeps values finite");
        SeparableComponent { base, s_power: self.s_power }
    }
}

/// Metric and second fundamental form of one hypersurface in A-net normal
/// form: `g11 = g22`, `g_pp = 1`, and `b` supported on the 1-2 block.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalData {
    pub n: usize,
    pub linfac: Option<LinearFactor>,
    pub g11: SeparableComponent,
    pub b11: SeparableComponent,
    pub b22: SeparableComponent,
    pub b12: SeparableComponent,
    /// Sign of `b12` relative to `s`.
    pub epsilon: f64,
}

impl FundamentalData {
    pub fn grid(&self) -> &Grid2 {
        self.g11.base.grid()
    }

    /// Named components, `g22` included, in a fixed order.
    pub fn components(&self) -> [(&'static str, &SeparableComponent); 5] {
        [("g11", &self.g11), ("g22", &self.g11), ("b11", &self.b11), ("b22", &self.b22), ("b12", &self.b12)]
    }

    /// The full `n`-dimensional chart, including the implicit unit `g_pp`.
    pub fn to_chart(&self) -> Result<TensorChart, TensorError> {
        let grid = *self.grid();
        let mut chart = TensorChart::zeros(self.n, grid, self.linfac.clone())?;
        let g = self.g11.to_sfield();
        chart.set_g(0, 0, g.clone());
        chart.set_g(1, 1, g);
        for p in 2..self.n {
            chart.set_g(p, p, SField::constant(grid, 1.0, 0));
        }
        chart.set_b(0, 0, self.b11.to_sfield());
        chart.set_b(1, 1, self.b22.to_sfield());
        chart.set_b(0, 1, self.b12.to_sfield());
        Ok(chart)
    }
}
