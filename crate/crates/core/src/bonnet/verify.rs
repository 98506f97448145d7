use crate::exec;
use crate::fieldcore::Sampling;
use crate::framegeom::{codazzi_reduced_residuals, gauss_reduced_residuals, log_t_compatibility};
use crate::report::{Bound, ResidualEntry, ResidualReport};
use crate::tensorlab::{
    codazzi_general_residual, detect_anet, gauss_general_residual, principal_curvatures, FundamentalData, TensorChart,
};

use super::{constraint_residuals, construct_pair, frame_data, BonnetError, BonnetFields, FundamentalPair, Variant};

/// Pointwise spectra must agree to this for a pair to count as isometric
/// with equal mean curvature.
pub const SPECTRUM_TOL: f64 = 1e-12;
/// Constraint violation above which the reverse probe expects the oracle to object.
pub const REVERSE_PROBE_DELTA: f64 = 0.1;
pub const REVERSE_PROBE_GAUSS: f64 = 0.01;

fn oracle(chart: &TensorChart, sampling: &Sampling) -> Result<ResidualReport, BonnetError> {
    let mut r = gauss_general_residual(chart, sampling)?;
    r.extend(codazzi_general_residual(chart, sampling)?);
    Ok(r)
}

/// Every residual the generating data must satisfy: master constraints, the
/// reduced Codazzi/Gauss/log-t systems on the constructed `M`, and the
/// general Gauss–Codazzi oracle. Unjudged.
pub fn check_suite(f: &BonnetFields, variant: Variant, sampling: &Sampling) -> Result<ResidualReport, BonnetError> {
    let mut r = constraint_residuals(f, sampling.order)?.report();
    let pair = construct_pair(f, variant)?;
    let (fs, cs) = frame_data(&pair.m, sampling)?;
    r.extend(codazzi_reduced_residuals(&fs, &cs, sampling)?);
    r.extend(gauss_reduced_residuals(&fs, &cs, sampling)?);
    r.extend(log_t_compatibility(&fs, &cs, sampling)?);
    r.extend(oracle(&pair.m.to_chart()?, sampling)?);
    Ok(r)
}

/// Per-sample `(H, eigenvalues)` of a chart, `s` outermost within each node.
fn spectra(chart: &TensorChart, sampling: &Sampling) -> Result<Vec<(f64, Vec<f64>)>, BonnetError> {
    let (n1, n2) = chart.grid().shape();
    let ns = sampling.sigmas.len();
    exec::map_indexed(n1 * n2 * ns, |k| {
        let (node, l) = (k / ns, k % ns);
        let p = principal_curvatures(chart, node / n2, node % n2, sampling.sigmas[l])?;
        Ok((p.h, p.eigenvalues))
    })
    .into_iter()
    .collect()
}

fn sampled_max(fd: &FundamentalData, sampling: &Sampling, f: impl Fn(usize, usize, f64) -> f64) -> f64 {
    let (n1, n2) = fd.grid().shape();
    let mut m = f64::NEG_INFINITY;
    for i in 0..n1 {
        for j in 0..n2 {
            for &s in &sampling.sigmas {
                let v = f(i, j, s);
                m = if v.is_nan() || v > m { v } else { m };
            }
        }
    }
    m
}

/// Checks that `M` and `M′` form a genuine Bonnet pair:
/// (i) identical metric, (ii) equal mean curvature, (iii) different second
/// fundamental forms, (iv) equal spectra, (v) both pass the oracle at `tol`.
pub fn verify_pair(pair: &FundamentalPair, tol: f64, sampling: &Sampling) -> Result<ResidualReport, BonnetError> {
    let (m, mp) = (&pair.m, &pair.m_prime);
    let g = "pair";
    let mut r = ResidualReport::new();

    let same_metric = m.g11 == mp.g11 && m.n == mp.n && m.linfac == mp.linfac;
    let metric_gap = if same_metric {
        0.0
    } else if m.g11.s_power != mp.g11.s_power || m.grid() != mp.grid() {
        f64::INFINITY
    } else {
        (m.g11.base.values() - mp.g11.base.values()).iter().fold(0.0, |a: f64, v| a.max(v.abs())).max(f64::MIN_POSITIVE)
    };
    r.push(ResidualEntry::scalar("metric_identical", g, metric_gap).with_bound(Bound::AtMost(0.0)));

    let (chart, chart_p) = (m.to_chart()?, mp.to_chart()?);
    let (sp, sp_p) = (spectra(&chart, sampling)?, spectra(&chart_p, sampling)?);
    let mut dh: f64 = 0.0;
    let mut dev: f64 = 0.0;
    for ((h, ev), (hp, evp)) in sp.iter().zip(&sp_p) {
        dh = dh.max((h - hp).abs());
        if ev.len() != evp.len() {
            dev = f64::INFINITY;
        }
        for (a, b) in ev.iter().zip(evp) {
            dev = dev.max((a - b).abs());
        }
    }
    r.push(ResidualEntry::scalar("mean_curvature_match", g, dh).with_bound(Bound::AtMost(SPECTRUM_TOL)));

    let db12 = sampled_max(m, sampling, |i, j, s| (m.b12.eval(i, j, s) - mp.b12.eval(i, j, s)).abs());
    let min_b12 = -sampled_max(m, sampling, |i, j, s| -m.b12.eval(i, j, s).abs());
    r.push(ResidualEntry::scalar("nontriviality", g, db12).with_bound(Bound::AtLeast(2.0 * min_b12)));
    r.push(ResidualEntry::scalar("spectrum_match", g, dev).with_bound(Bound::AtMost(SPECTRUM_TOL)));

    for (prefix, c) in [("M.", &chart), ("M'.", &chart_p)] {
        let mut o = oracle(c, sampling)?.prefixed(prefix);
        for e in &mut o.entries {
            e.bound = Some(Bound::AtMost(tol));
        }
        r.extend(o);
    }
    r.judge(tol, false);
    Ok(r)
}

/// Numerical form of "Bonnet iff A-net".
///
/// Forward: small master-constraint residuals must come with small oracle
/// residuals and an A-net. Reverse probe: when the constraints are violated by
/// at least [`REVERSE_PROBE_DELTA`], the Gauss oracle must object by at least
/// [`REVERSE_PROBE_GAUSS`], i.e. the tensors are not those of a hypersurface.
pub fn theorem_roundtrip(f: &BonnetFields, tol: f64, sampling: &Sampling) -> Result<ResidualReport, BonnetError> {
    let mut r = constraint_residuals(f, sampling.order)?.report();
    let pair = construct_pair(f, Variant::DerivationConsistent)?;
    let chart = pair.m.to_chart()?;
    let o = oracle(&chart, sampling)?;
    let gauss = o.linf("gauss_general").unwrap_or(f64::NAN);
    r.extend(o);

    let verdict = detect_anet(&chart, f.case().linfac(), sampling, tol.max(1e-9));
    let failed = verdict.diagnostics.iter().filter(|d| !d.pass).count();
    r.push(ResidualEntry::scalar("anet_violations", "anet", failed as f64).with_bound(Bound::AtMost(0.0)));

    if r.group_linf("constraints") >= REVERSE_PROBE_DELTA {
        r.push(
            ResidualEntry::scalar("reverse_probe_gauss", "theorem", gauss)
                .with_bound(Bound::AtLeast(REVERSE_PROBE_GAUSS)),
        );
    }
    r.judge(tol, false);
    Ok(r)
}
