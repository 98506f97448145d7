use serde::{Deserialize, Serialize};

use super::FieldError;

/// Minimum node count per axis; leaves room for centered stencils.
pub const MIN_NODES: usize = 5;

/// Uniform tensor grid over the `(x¹, x²)` coordinate patch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2 {
    pub x1_min: f64,
    pub x1_max: f64,
    pub n1: usize,
    pub x2_min: f64,
    pub x2_max: f64,
    pub n2: usize,
}

impl Grid2 {
    pub fn new(
        (x1_min, x1_max, n1): (f64, f64, usize),
        (x2_min, x2_max, n2): (f64, f64, usize),
    ) -> Result<Self, FieldError> {
        let g = Grid2 { x1_min, x1_max, n1, x2_min, x2_max, n2 };
        g.validate()?;
        Ok(g)
    }

    /// Square patch `[a, b]²` with `n` nodes per axis.
    pub fn square(a: f64, b: f64, n: usize) -> Result<Self, FieldError> {
        Self::new((a, b, n), (a, b, n))
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if self.n1 < MIN_NODES || self.n2 < MIN_NODES {
            return Err(FieldError::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes per axis, got {}x{}",
                self.n1, self.n2
            )));
        }
        let finite = [self.x1_min, self.x1_max, self.x2_min, self.x2_max].iter().all(|v| v.is_finite());
        if !finite || self.x1_max <= self.x1_min || self.x2_max <= self.x2_min {
            return Err(FieldError::InvalidGrid(format!(
                "bounds must be finite and increasing: x1=[{},{}] x2=[{},{}]",
                self.x1_min, self.x1_max, self.x2_min, self.x2_max
            )));
        }
        Ok(())
    }

    pub fn h1(&self) -> f64 {
        (self.x1_max - self.x1_min) / (self.n1 - 1) as f64
    }

    pub fn h2(&self) -> f64 {
        (self.x2_max - self.x2_min) / (self.n2 - 1) as f64
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn node_count(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn x1(&self, i: usize) -> f64 {
        axis_coord(self.x1_min, self.x1_max, self.n1, i)
    }

    pub fn x2(&self, j: usize) -> f64 {
        axis_coord(self.x2_min, self.x2_max, self.n2, j)
    }
}

// Written as a ratio of integers so nested grids share node coordinates bit-for-bit.
fn axis_coord(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        return hi;
    }
    lo + (hi - lo) * (i as f64 / (n - 1) as f64)
}

/// Refine both axes by an integer factor; coarse nodes stay nodes of the fine grid.
pub fn grid_refine(grid: &Grid2, factor: usize) -> Result<Grid2, FieldError> {
    if factor < 2 {
        return Err(FieldError::InvalidGrid(format!("refinement factor {factor} < 2")));
    }
    let refine = |n: usize| (n - 1).checked_mul(factor).and_then(|m| m.checked_add(1)).ok_or(FieldError::Capacity);
    let n1 = refine(grid.n1)?;
    let n2 = refine(grid.n2)?;
    n1.checked_mul(n2).ok_or(FieldError::Capacity)?;
    Ok(Grid2 { n1, n2, ..*grid })
}

/// A [`Grid2`] extended by a third axis `σ` that samples the linear factor `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    pub plane: Grid2,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub n3: usize,
}

impl Grid3 {
    pub fn new(plane: Grid2, (sigma_min, sigma_max, n3): (f64, f64, usize)) -> Result<Self, FieldError> {
        plane.validate()?;
        if n3 < MIN_NODES {
            return Err(FieldError::InvalidGrid(format!("need at least {MIN_NODES} sigma nodes, got {n3}")));
        }
        if !(sigma_min.is_finite() && sigma_max.is_finite()) || sigma_max <= sigma_min {
            return Err(FieldError::InvalidGrid(format!(
                "sigma range [{sigma_min},{sigma_max}] must be finite and increasing"
            )));
        }
        if sigma_min <= 0.0 {
            return Err(FieldError::Domain(format!(
                "sigma range [{sigma_min},{sigma_max}] reaches the zero set of the linear factor"
            )));
        }
        Ok(Grid3 { plane, sigma_min, sigma_max, n3 })
    }

    pub fn sigma(&self, k: usize) -> f64 {
        axis_coord(self.sigma_min, self.sigma_max, self.n3, k)
    }

    pub fn sigmas(&self) -> Vec<f64> {
        (0..self.n3).map(|k| self.sigma(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refine_counts() {
        let g = Grid2::square(0.0, 1.0, 5).unwrap();
        assert_eq!(grid_refine(&g, 2).unwrap().n1, 9);
        let g = Grid2::square(0.0, 1.0, 33).unwrap();
        assert_eq!(grid_refine(&g, 4).unwrap().n1, 129);
        assert!(grid_refine(&g, 1).is_err());
    }

    #[test]
    fn refine_nests_nodes() {
        let g = Grid2::new((-0.3, 1.7, 17), (2.0, 2.9, 11)).unwrap();
        for factor in [2, 3, 4, 7] {
            let f = grid_refine(&g, factor).unwrap();
            for i in 0..g.n1 {
                assert_eq!(g.x1(i).to_bits(), f.x1(factor * i).to_bits());
            }
            for j in 0..g.n2 {
                assert_eq!(g.x2(j).to_bits(), f.x2(factor * j).to_bits());
            }
        }
    }

    #[test]
    fn refine_overflow() {
        let g = Grid2 { n1: usize::MAX / 2, ..Grid2::square(0.0, 1.0, 5).unwrap() };
        assert_eq!(grid_refine(&g, 4), Err(FieldError::Capacity));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid2::square(0.0, 1.0, 4).is_err());
        assert!(Grid2::new((1.0, 0.0, 9), (0.0, 1.0, 9)).is_err());
        let plane = Grid2::square(0.0, 1.0, 9).unwrap();
        assert!(matches!(Grid3::new(plane, (-1.0, 1.0, 9)), Err(FieldError::Domain(_))));
        assert!(Grid3::new(plane, (1.0, 2.0, 17)).is_ok());
    }
}
