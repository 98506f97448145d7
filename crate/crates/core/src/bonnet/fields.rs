use crate::fieldcore::{Grid2, ScalarField2};
use crate::tensorlab::{LinearFactor, MAX_DIM};

use super::{BonnetError, InvariantKind};

/// Lower bound on `|𝕳|`, `|𝕵|` and `sin θ`.
pub const ADMISSIBLE_MIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Case {
    /// `T_p = C^p/s ≠ 0`.
    One(LinearFactor),
    /// `T_p = 0`; `s ≡ 1`.
    Two,
}

impl Case {
    pub fn linfac(&self) -> Option<&LinearFactor> {
        match self {
            Case::One(lf) => Some(lf),
            Case::Two => None,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.linfac().map_or(0.0, LinearFactor::kappa)
    }

    /// Power of `s` carried by `H`, `J` (and by `g11` with twice the magnitude).
    pub fn s_power(&self) -> i32 {
        match self {
            Case::One(_) => 1,
            Case::Two => 0,
        }
    }
}

/// Generating data `(𝕳, 𝕵, θ)` of a Bonnet pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BonnetFields {
    frak_h: ScalarField2,
    frak_j: ScalarField2,
    theta: ScalarField2,
    case: Case,
    n: usize,
}

/// First node violating `pred`.
fn violation(f: &ScalarField2, pred: impl Fn(f64) -> bool) -> Option<((usize, usize), f64)> {
    f.values().indexed_iter().find(|(_, &v)| !pred(v)).map(|(ij, &v)| (ij, v))
}

impl BonnetFields {
    pub fn new(
        frak_h: ScalarField2,
        frak_j: ScalarField2,
        theta: ScalarField2,
        case: Case,
        n: usize,
    ) -> Result<Self, BonnetError> {
        use InvariantKind::*;
        if !(3..=MAX_DIM).contains(&n) {
            return Err(BonnetError::invariant(Dimension, format!("n = {n} outside 3..={MAX_DIM}")));
        }
        if let Case::One(lf) = &case {
            if lf.r() > n {
                return Err(BonnetError::invariant(Dimension, format!("linear factor reaches x^{} > n = {n}", lf.r())));
            }
        }
        if frak_j.grid() != frak_h.grid() || theta.grid() != frak_h.grid() {
            return Err(BonnetError::invariant(Grid, "𝕳, 𝕵, θ must share one grid"));
        }
        if let Some(((i, j), v)) = violation(&frak_h, |v| v.abs() >= ADMISSIBLE_MIN) {
            return Err(BonnetError::invariant(MinimalH, format!("|𝕳| = {:e} at node ({i}, {j})", v.abs())));
        }
        if let Some(((i, j), v)) = violation(&frak_j, |v| v.abs() >= ADMISSIBLE_MIN) {
            return Err(BonnetError::invariant(VanishingJ, format!("|𝕵| = {:e} at node ({i}, {j})", v.abs())));
        }
        let sign = frak_j.at(0, 0).signum();
        if let Some(((i, j), v)) = violation(&frak_j, |v| v.signum() == sign) {
            return Err(BonnetError::invariant(JSignChange, format!("𝕵 = {v} at node ({i}, {j}) flips sign")));
        }
        let theta_ok = |t: f64| t > 0.0 && t < std::f64::consts::PI && t.sin() >= ADMISSIBLE_MIN;
        if let Some(((i, j), v)) = violation(&theta, theta_ok) {
            return Err(BonnetError::invariant(ThetaRange, format!("θ = {v} at node ({i}, {j}) outside (0, π)")));
        }
        Ok(BonnetFields { frak_h, frak_j, theta, case, n })
    }

    pub fn frak_h(&self) -> &ScalarField2 {
        &self.frak_h
    }

    pub fn frak_j(&self) -> &ScalarField2 {
        &self.frak_j
    }

    pub fn theta(&self) -> &ScalarField2 {
        &self.theta
    }

    pub fn case(&self) -> &Case {
        &self.case
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid2 {
        self.frak_h.grid()
    }

    /// `∈ = sgn 𝕵`.
    pub fn epsilon(&self) -> f64 {
        self.frak_j.at(0, 0).signum()
    }
}
