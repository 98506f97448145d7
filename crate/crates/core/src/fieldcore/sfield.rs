use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array2, Array3};

use super::field::spacing;
use super::{stencil, Axis, FieldError, Grid2, ScalarField2, StencilOrder};

/// A field on `(x¹, x², s)` of the form `Σ_k base_k(x¹, x²) · s^k`.
///
/// Every fundamental-tensor component of a Bonnet pair is a monomial in the
/// linear factor `s`, and the connection and curvature built from them stay
/// Laurent polynomials in `s`. Derivatives in `x¹`, `x²` act on the bases by
/// finite differences; derivatives in `s` are taken exactly by the power rule.
/// An empty term map is the identically-zero field.
#[derive(Debug, Clone, PartialEq)]
pub struct SField {
    grid: Grid2,
    terms: BTreeMap<i32, Array2<f64>>,
}

impl SField {
    pub fn zero(grid: Grid2) -> Self {
        SField { grid, terms: BTreeMap::new() }
    }

    pub fn monomial(grid: Grid2, base: Array2<f64>, power: i32) -> Self {
        assert_eq!(base.dim(), grid.shape(), "base shape must match grid");
        let mut terms = BTreeMap::new();
        terms.insert(power, base);
        SField { grid, terms }
    }

    pub fn constant(grid: Grid2, c: f64, power: i32) -> Self {
        if c == 0.0 {
            return Self::zero(grid);
        }
        Self::monomial(grid, Array2::from_elem(grid.shape(), c), power)
    }

    pub fn from_field(field: &ScalarField2, power: i32) -> Self {
        Self::monomial(*field.grid(), field.values().clone(), power)
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Array2<f64>)> {
        self.terms.iter().map(|(&p, a)| (p, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((power, base))` when the field is a single monomial.
    pub fn as_monomial(&self) -> Option<(i32, &Array2<f64>)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&p, a)| (p, a))
        } else {
            None
        }
    }

    /// Largest `|power|` present (zero for the zero field).
    pub fn max_abs_power(&self) -> i32 {
        self.terms.keys().map(|p| p.abs()).max().unwrap_or(0)
    }

    fn check_grid(&self, other: &SField) {
        assert_eq!(self.grid, other.grid, "SField grid mismatch");
    }

    fn accumulate(terms: &mut BTreeMap<i32, Array2<f64>>, power: i32, value: Array2<f64>) {
        match terms.get_mut(&power) {
            Some(acc) => *acc += &value,
            None => {
                terms.insert(power, value);
            }
        }
    }

    pub fn scale(&self, c: f64) -> SField {
        if c == 0.0 {
            return SField::zero(self.grid);
        }
        SField { grid: self.grid, terms: self.terms.iter().map(|(&p, a)| (p, a * c)).collect() }
    }

    /// Multiply every term by a plain `(x¹, x²)` array.
    pub fn mul_plain(&self, f: &Array2<f64>) -> SField {
        SField { grid: self.grid, terms: self.terms.iter().map(|(&p, a)| (p, a * f)).collect() }
    }

    /// Multiplicative inverse; defined only for monomials with a zero-free base.
    pub fn recip(&self) -> Result<SField, FieldError> {
        let (p, base) =
            self.as_monomial().ok_or_else(|| FieldError::Domain("reciprocal of a non-monomial s-field".into()))?;
        if base.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(FieldError::Domain("reciprocal of a field with zero or non-finite nodes".into()));
        }
        Ok(SField::monomial(self.grid, base.mapv(f64::recip), -p))
    }

    /// Square root of a monomial with positive base and even power.
    pub fn sqrt(&self) -> Result<SField, FieldError> {
        let (p, base) =
            self.as_monomial().ok_or_else(|| FieldError::Domain("square root of a non-monomial s-field".into()))?;
        if p % 2 != 0 {
            return Err(FieldError::Domain(format!("square root of odd power s^{p}")));
        }
        if base.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return Err(FieldError::Domain("square root of a non-positive field".into()));
        }
        Ok(SField::monomial(self.grid, base.mapv(f64::sqrt), p / 2))
    }

    /// Derivative along `x¹` or `x²`, applied to each base.
    pub fn d(&self, axis: Axis, order: StencilOrder) -> Result<SField, FieldError> {
        let h = spacing(&self.grid, axis);
        let mut terms = BTreeMap::new();
        for (&p, a) in &self.terms {
            let da = stencil::first(a, axis, h, order)?;
            if da.iter().any(|&v| v != 0.0) {
                terms.insert(p, da);
            }
        }
        Ok(SField { grid: self.grid, terms })
    }

    /// Second derivative along a planar axis (compact three-point stencil).
    pub fn d2(&self, axis: Axis) -> Result<SField, FieldError> {
        let h = spacing(&self.grid, axis);
        let mut terms = BTreeMap::new();
        for (&p, a) in &self.terms {
            let da = stencil::second(a, axis, h)?;
            if da.iter().any(|&v| v != 0.0) {
                terms.insert(p, da);
            }
        }
        Ok(SField { grid: self.grid, terms })
    }

    /// Exact derivative with respect to `s`.
    pub fn d_s(&self) -> SField {
        let mut terms = BTreeMap::new();
        for (&p, a) in &self.terms {
            if p != 0 {
                terms.insert(p - 1, a * f64::from(p));
            }
        }
        SField { grid: self.grid, terms }
    }

    pub fn eval(&self, i: usize, j: usize, s: f64) -> f64 {
        self.terms.iter().map(|(&p, a)| a[[i, j]] * s.powi(p)).sum()
    }

    /// Sample at every `(i, j)` node and every `s` in `sigmas`; shape `(n1, n2, sigmas.len())`.
    pub fn sample(&self, sigmas: &[f64]) -> Array3<f64> {
        let (n1, n2) = self.grid.shape();
        let mut out = Array3::zeros((n1, n2, sigmas.len()));
        for (k, &s) in sigmas.iter().enumerate() {
            for (&p, a) in &self.terms {
                let w = s.powi(p);
                let mut layer = out.index_axis_mut(ndarray::Axis(2), k);
                layer.scaled_add(w, a);
            }
        }
        out
    }
}

/// Per-node maximum of `|f|` over a set of s-fields, sampled at `sigmas`.
/// Shape `(n1, n2, sigmas.len())`; the zero field set yields zeros.
pub fn max_abs_samples(grid: &Grid2, fields: &[SField], sigmas: &[f64]) -> Array3<f64> {
    let (n1, n2) = grid.shape();
    let sampled = crate::exec::map_indexed(fields.len(), |k| {
        let f = &fields[k];
        (!f.is_zero()).then(|| f.sample(sigmas))
    });
    let mut out = Array3::zeros((n1, n2, sigmas.len()));
    for s in sampled.into_iter().flatten() {
        out.zip_mut_with(&s, |m, &v| {
            let a = v.abs();
            if a.is_nan() || a > *m {
                *m = a;
            }
        });
    }
    out
}

impl Add for &SField {
    type Output = SField;
    fn add(self, rhs: &SField) -> SField {
        self.check_grid(rhs);
        let mut terms = self.terms.clone();
        for (&p, a) in &rhs.terms {
            SField::accumulate(&mut terms, p, a.clone());
        }
        SField { grid: self.grid, terms }
    }
}

impl Sub for &SField {
    type Output = SField;
    fn sub(self, rhs: &SField) -> SField {
        self + &(-rhs)
    }
}

impl Neg for &SField {
    type Output = SField;
    fn neg(self) -> SField {
        SField { grid: self.grid, terms: self.terms.iter().map(|(&p, a)| (p, -a)).collect() }
    }
}

impl Mul for &SField {
    type Output = SField;
    fn mul(self, rhs: &SField) -> SField {
        self.check_grid(rhs);
        let mut terms = BTreeMap::new();
        for (&p, a) in &self.terms {
            for (&q, b) in &rhs.terms {
                SField::accumulate(&mut terms, p + q, a * b);
            }
        }
        SField { grid: self.grid, terms }
    }
}

impl Mul<f64> for &SField {
    type Output = SField;
    fn mul(self, c: f64) -> SField {
        self.scale(c)
    }
}
