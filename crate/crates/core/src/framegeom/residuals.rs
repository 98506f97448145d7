use crate::fieldcore::{max_abs_samples, SField, Sampling};
use crate::report::{ResidualEntry, ResidualReport};

use super::{ConnectionScalars, FrameScalars, GeomError, VANISHING_T};

fn entry(name: &str, group: &str, fields: &[SField], sampling: &Sampling) -> Result<ResidualEntry, GeomError> {
    let grid =
        fields.first().map(|f| *f.grid()).ok_or_else(|| GeomError::Shape(format!("{name}: no residual fields")))?;
    if fields.iter().any(|f| *f.grid() != grid) {
        return Err(GeomError::Shape(format!("{name}: residual fields on different grids")));
    }
    Ok(ResidualEntry::from_samples(name, group, &grid, &max_abs_samples(&grid, fields, &sampling.sigmas)))
}

fn check_grids(fs: &FrameScalars, cs: &ConnectionScalars) -> Result<(), GeomError> {
    let g = fs.grid();
    if fs.kbar.grid() != g || fs.t.grid() != g || cs.h.grid() != g || cs.hbar.grid() != g {
        return Err(GeomError::Shape("frame and connection scalars on different grids".into()));
    }
    Ok(())
}

/// Per transverse index, `E_p(f) + f T_p`.
fn transverse(f: &SField, cs: &ConnectionScalars) -> Vec<SField> {
    cs.t.iter().enumerate().map(|(k, tp)| &cs.ep(k, f) + &(f * tp)).collect()
}

/// The seven reduced Codazzi equations; each entry is the pointwise max over
/// transverse indices where applicable.
pub fn codazzi_reduced_residuals(
    fs: &FrameScalars,
    cs: &ConnectionScalars,
    sampling: &Sampling,
) -> Result<ResidualReport, GeomError> {
    check_grids(fs, cs)?;
    let (k, kbar, t) = (&fs.k, &fs.kbar, &fs.t);
    let g = "codazzi_reduced";
    let mut r = ResidualReport::new();
    r.push(entry("Ep(k)+k*Tp", g, &transverse(k, cs), sampling)?);
    r.push(entry("Ep(kbar)+kbar*Tp", g, &transverse(kbar, cs), sampling)?);
    r.push(entry("Ep(t)+t*Tp", g, &transverse(t, cs), sampling)?);
    let d = k - kbar;
    r.push(entry("E2(k)+(k-kbar)*h", g, &[&cs.e2(k)? + &(&d * &cs.h)], sampling)?);
    r.push(entry("E1(kbar)+(kbar-k)*hbar", g, &[&cs.e1(kbar)? - &(&d * &cs.hbar)], sampling)?);
    r.push(entry("E1(t)+2t*hbar", g, &[&cs.e1(t)? + &(t * &cs.hbar).scale(2.0)], sampling)?);
    r.push(entry("E2(t)+2t*h", g, &[&cs.e2(t)? + &(t * &cs.h).scale(2.0)], sampling)?);
    Ok(r)
}

/// First three reduced Gauss equations. The remaining ones involve only the
/// transverse connection forms, which vanish in normalized coordinates.
pub fn gauss_reduced_residuals(
    fs: &FrameScalars,
    cs: &ConnectionScalars,
    sampling: &Sampling,
) -> Result<ResidualReport, GeomError> {
    check_grids(fs, cs)?;
    let (h, hbar) = (&cs.h, &cs.hbar);
    let mut lhs = &(&cs.e1(hbar)? + &cs.e2(h)?) + &(&(h * h) + &(hbar * hbar));
    for tp in &cs.t {
        lhs = &lhs + &(tp * tp);
    }
    let rhs = &(&fs.t * &fs.t) - &(&fs.k * &fs.kbar);
    let g = "gauss_reduced";
    let mut r = ResidualReport::new();
    r.push(entry("E1(hbar)+E2(h)+sum(Tp^2)+h^2+hbar^2-(t^2-k*kbar)", g, &[&lhs - &rhs], sampling)?);
    r.push(entry("Ep(h)+Tp*h", g, &transverse(h, cs), sampling)?);
    r.push(entry("Ep(hbar)+Tp*hbar", g, &transverse(hbar, cs), sampling)?);
    Ok(r)
}

/// `E₁(ln|t|) + 2h̄`, `E₂(ln|t|) + 2h` and the integrability condition `E₁(h) − E₂(h̄)`.
pub fn log_t_compatibility(
    fs: &FrameScalars,
    cs: &ConnectionScalars,
    sampling: &Sampling,
) -> Result<ResidualReport, GeomError> {
    check_grids(fs, cs)?;
    let grid = *fs.grid();
    let Some((_, base)) = fs.t.as_monomial() else {
        let (i, j) = (0, 0);
        return Err(if fs.t.is_zero() {
            GeomError::VanishingT { i, j, value: 0.0 }
        } else {
            GeomError::Shape("t must be a single s-monomial".into())
        });
    };
    let samples = fs.t.sample(&sampling.sigmas);
    for ((i, j, _), v) in samples.indexed_iter() {
        if !(v.abs() >= VANISHING_T) {
            return Err(GeomError::VanishingT { i, j, value: v.abs() });
        }
    }
    // ln|t| = ln|base| + p ln s, and E₁, E₂ do not see s.
    let ln = SField::monomial(grid, base.mapv(|v| v.abs().ln()), 0);
    let g = "log_t";
    let mut r = ResidualReport::new();
    r.push(entry("E1(ln|t|)+2hbar", g, &[&cs.e1(&ln)? + &cs.hbar.scale(2.0)], sampling)?);
    r.push(entry("E2(ln|t|)+2h", g, &[&cs.e2(&ln)? + &cs.h.scale(2.0)], sampling)?);
    r.push(entry("E1(h)-E2(hbar)", g, &[&cs.e1(&cs.h)? - &cs.e2(&cs.hbar)?], sampling)?);
    Ok(r)
}
