use std::f64::consts::PI;

use nalgebra::DMatrix;
use ndarray::{Array2, Zip};

use crate::fieldcore::{Grid2, SField, ScalarField2};

use super::{GeomError, ADMISSIBLE_MIN};

/// `k`, `k̄`, `t`: the second fundamental form of `M` in the bisecting frame.
/// Each is a single s-monomial `base(x¹, x²)·s^p` (or identically zero).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameScalars {
    pub k: SField,
    pub kbar: SField,
    pub t: SField,
}

/// Mean curvature `H = (k1+k2)/2`, `J = (k1−k2)/2` (signed) and the angle
/// `θ ∈ (0, π)` between the bisecting and principal frames.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalData {
    pub h: SField,
    pub j: SField,
    pub theta: ScalarField2,
}

impl PrincipalData {
    pub fn k1(&self) -> SField {
        &self.h + &self.j
    }

    pub fn k2(&self) -> SField {
        &self.h - &self.j
    }
}

impl FrameScalars {
    pub fn grid(&self) -> &Grid2 {
        self.k.grid()
    }
}

/// Power and base of a monomial; `None` for the identically-zero field.
fn monomial<'a>(f: &'a SField, what: &str) -> Result<Option<(i32, &'a Array2<f64>)>, GeomError> {
    if f.is_zero() {
        return Ok(None);
    }
    f.as_monomial().map(Some).ok_or_else(|| GeomError::Shape(format!("{what} must be a single s-monomial")))
}

fn common_power(parts: &[Option<(i32, &Array2<f64>)>]) -> Result<i32, GeomError> {
    let mut powers = parts.iter().flatten().map(|(p, _)| *p);
    let p = powers.next().unwrap_or(0);
    if powers.any(|q| q != p) {
        return Err(GeomError::Shape("frame scalars carry different powers of s".into()));
    }
    Ok(p)
}

fn base_or_zero(part: Option<(i32, &Array2<f64>)>, grid: &Grid2) -> Array2<f64> {
    part.map_or_else(|| Array2::zeros(grid.shape()), |(_, b)| b.clone())
}

fn same_grid(a: &Grid2, b: &Grid2, what: &str) -> Result<(), GeomError> {
    if a != b {
        return Err(GeomError::Shape(format!("{what} lives on a different grid")));
    }
    Ok(())
}

/// `(k, k̄, t) = (H + J cos θ, H − J cos θ, J sin θ)` at one point.
pub fn frame_scalars_at(h: f64, j: f64, theta: f64) -> (f64, f64, f64) {
    let (sin, cos) = theta.sin_cos();
    (h + j * cos, h - j * cos, j * sin)
}

pub fn frame_scalars(h: &SField, j: &SField, theta: &ScalarField2) -> Result<FrameScalars, GeomError> {
    let grid = *h.grid();
    same_grid(&grid, j.grid(), "J")?;
    same_grid(&grid, theta.grid(), "theta")?;
    let hp = monomial(h, "H")?;
    let jp = monomial(j, "J")?;
    let power = common_power(&[hp, jp])?;
    let hb = base_or_zero(hp, &grid);
    let jb = base_or_zero(jp, &grid);
    for ((i, jj), &v) in hb.indexed_iter() {
        if v.abs() < ADMISSIBLE_MIN {
            return Err(GeomError::Invariant(format!("|H| = {:e} < {ADMISSIBLE_MIN:e} at node ({i}, {jj})", v.abs())));
        }
        if jb[[i, jj]].abs() < ADMISSIBLE_MIN {
            return Err(GeomError::Invariant(format!(
                "|J| = {:e} < {ADMISSIBLE_MIN:e} at node ({i}, {jj})",
                jb[[i, jj]].abs()
            )));
        }
        let th = theta.at(i, jj);
        if !(th > 0.0 && th < PI) {
            return Err(GeomError::Invariant(format!("theta = {th} outside (0, pi) at node ({i}, {jj})")));
        }
    }
    let mut k = Array2::zeros(grid.shape());
    let mut kbar = Array2::zeros(grid.shape());
    let mut t = Array2::zeros(grid.shape());
    Zip::from(&mut k)
        .and(&mut kbar)
        .and(&mut t)
        .and(&hb)
        .and(&jb)
        .and(theta.values())
        .for_each(|k, kbar, t, &h, &j, &th| (*k, *kbar, *t) = frame_scalars_at(h, j, th));
    Ok(FrameScalars {
        k: SField::monomial(grid, k, power),
        kbar: SField::monomial(grid, kbar, power),
        t: SField::monomial(grid, t, power),
    })
}

/// Inverse of [`frame_scalars_at`] on the branch `θ ∈ (0, π)`, where the sign
/// of `t` is carried by `J`. At `t = 0` the angle is `0` or `π` and `J > 0`.
pub fn principal_from_frame_at(k: f64, kbar: f64, t: f64) -> Option<(f64, f64, f64)> {
    let h = 0.5 * (k + kbar);
    let d = 0.5 * (k - kbar);
    let m = d.hypot(t);
    if !(m >= ADMISSIBLE_MIN) {
        return None;
    }
    Some(if t < 0.0 { (h, -m, (-t).atan2(-d)) } else { (h, m, t.atan2(d)) })
}

pub fn principal_from_frame(fs: &FrameScalars) -> Result<PrincipalData, GeomError> {
    let grid = *fs.grid();
    same_grid(&grid, fs.kbar.grid(), "kbar")?;
    same_grid(&grid, fs.t.grid(), "t")?;
    let parts = [monomial(&fs.k, "k")?, monomial(&fs.kbar, "kbar")?, monomial(&fs.t, "t")?];
    let power = common_power(&parts)?;
    let [k, kbar, t] = parts.map(|p| base_or_zero(p, &grid));
    let (n1, n2) = grid.shape();
    let mut h = Array2::zeros((n1, n2));
    let mut j = Array2::zeros((n1, n2));
    let mut theta = Array2::zeros((n1, n2));
    for i in 0..n1 {
        for jj in 0..n2 {
            let (kv, kb, tv) = (k[[i, jj]], kbar[[i, jj]], t[[i, jj]]);
            let (hv, jv, th) = principal_from_frame_at(kv, kb, tv).ok_or(GeomError::Umbilic {
                i,
                j: jj,
                value: (0.5 * (kv - kb)).hypot(tv),
            })?;
            h[[i, jj]] = hv;
            j[[i, jj]] = jv;
            theta[[i, jj]] = th;
        }
    }
    Ok(PrincipalData {
        h: SField::monomial(grid, h, power),
        j: SField::monomial(grid, j, power),
        theta: ScalarField2::new(grid, theta)?,
    })
}

/// Shape operators of `M` and `M′` in the common bisecting frame: the
/// leading block is the principal form `diag(k1, k2)` rotated by `θ/2`
/// (with opposite senses for the two), zeros elsewhere.
pub fn bisector_shape_operators(
    k1: f64,
    k2: f64,
    theta: f64,
    n: usize,
) -> Result<(DMatrix<f64>, DMatrix<f64>), GeomError> {
    if n < 3 {
        return Err(GeomError::Invariant(format!("dimension {n} < 3")));
    }
    if k1 == k2 {
        return Err(GeomError::Invariant("k1 = k2: the bisecting frame is undefined".into()));
    }
    let (sin, cos) = theta.sin_cos();
    let mut l = DMatrix::zeros(n, n);
    l[(0, 0)] = 0.5 * (k1 * (1.0 + cos) + k2 * (1.0 - cos));
    l[(1, 1)] = 0.5 * (k1 * (1.0 - cos) + k2 * (1.0 + cos));
    l[(0, 1)] = 0.5 * (k1 - k2) * sin;
    l[(1, 0)] = l[(0, 1)];
    let mut lp = l.clone();
    lp[(0, 1)] = -l[(0, 1)];
    lp[(1, 0)] = -l[(1, 0)];
    Ok((l, lp))
}
