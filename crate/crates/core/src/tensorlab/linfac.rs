use serde::{Deserialize, Serialize};

use super::TensorError;

/// The linear factor `s = C³x³ + ⋯ + C^r x^r` of the `T_p ≠ 0` case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFactor {
    coeffs: Vec<f64>,
}

impl LinearFactor {
    /// `coeffs[0]` is `C³`. Every coefficient must be finite and non-zero.
    pub fn new(coeffs: Vec<f64>) -> Result<Self, TensorError> {
        if coeffs.is_empty() {
            return Err(TensorError::LinearFactor("needs at least one coefficient".into()));
        }
        if let Some((k, c)) = coeffs.iter().enumerate().find(|(_, c)| **c == 0.0 || !c.is_finite()) {
            return Err(TensorError::LinearFactor(format!("C^{} = {c} must be finite and non-zero", k + 3)));
        }
        Ok(LinearFactor { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest transverse index carrying a coefficient.
    pub fn r(&self) -> usize {
        self.coeffs.len() + 2
    }

    /// `Σ (C^p)²`.
    pub fn kappa(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `C^p` for a 0-based chart index `a ≥ 2`; zero past `r`.
    pub fn coeff_for_index(&self, a: usize) -> f64 {
        a.checked_sub(2).and_then(|k| self.coeffs.get(k)).copied().unwrap_or(0.0)
    }

    /// `s` at transverse coordinates `(x³, …)`.
    pub fn value(&self, xp: &[f64]) -> f64 {
        self.coeffs.iter().zip(xp).map(|(c, x)| c * x).sum()
    }
}
