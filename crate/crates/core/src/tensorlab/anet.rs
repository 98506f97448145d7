use ndarray::Array3;
use serde::{Deserialize, Serialize};

use crate::fieldcore::Sampling;

use super::{LinearFactor, TensorChart};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnetDiagnostic {
    pub name: String,
    pub deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Outcome of testing a chart for the A-net form
/// `g11 = g22, g_pp = 1, b12 = ∈·s (or ∈), b_iq = b_pq = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnetVerdict {
    pub is_anet: bool,
    pub diagnostics: Vec<AnetDiagnostic>,
}

impl AnetVerdict {
    pub fn diagnostic(&self, name: &str) -> Option<&AnetDiagnostic> {
        self.diagnostics.iter().find(|d| d.name == name)
    }
}

fn max_abs(a: &Array3<f64>) -> f64 {
    a.iter().fold(0.0, |m: f64, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// Check each A-net condition within `tol`.
///
/// With a linear-factor hypothesis, `b12` is fitted per `(x¹, x²)` node by
/// least squares as `α + β·s` over the sampled `s` values: the intercept
/// must vanish, the slope must be one non-zero constant across the patch and
/// the fit must be exact. Without one, `b12` must be the constant `±1`.
pub fn detect_anet(
    chart: &TensorChart,
    hypothesis: Option<&LinearFactor>,
    sampling: &Sampling,
    tol: f64,
) -> AnetVerdict {
    let n = chart.n();
    let sig = &sampling.sigmas;
    let s = |a: usize, b: usize| chart.b(a, b).sample(sig);
    let g = |a: usize, b: usize| chart.g(a, b).sample(sig);
    let mut diags: Vec<(String, f64, bool)> = Vec::new();
    let mut push = |name: &str, deviation: f64| diags.push((name.to_string(), deviation, false));

    push("g11-g22", max_abs(&(&g(0, 0) - &g(1, 1))));
    let mut gpp: f64 = 0.0;
    let mut goff: f64 = 0.0;
    let mut biq: f64 = 0.0;
    let mut bpq: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            if a == b && a >= 2 {
                gpp = gpp.max(max_abs(&g(a, a).mapv(|v| v - 1.0)));
            }
            if a != b {
                goff = goff.max(max_abs(&g(a, b)));
            }
            if a < 2 && b >= 2 {
                biq = biq.max(max_abs(&s(a, b)));
            }
            if a >= 2 {
                bpq = bpq.max(max_abs(&s(a, b)));
            }
        }
    }
    push("g_pp-1", gpp);
    push("g_offdiag", goff);
    push("b_iq", biq);
    push("b_pq", bpq);

    let b12 = s(0, 1);
    let mut slope_floor = None;
    match hypothesis {
        Some(_) if sig.len() >= 2 => {
            let (n1, n2, m) = b12.dim();
            let mean_s = sig.iter().sum::<f64>() / m as f64;
            let var_s: f64 = sig.iter().map(|x| (x - mean_s).powi(2)).sum();
            let mut max_intercept: f64 = 0.0;
            let mut max_fit: f64 = 0.0;
            let mut slopes = Vec::with_capacity(n1 * n2);
            for i in 0..n1 {
                for j in 0..n2 {
                    let ys: Vec<f64> = (0..m).map(|k| b12[[i, j, k]]).collect();
                    let mean_y = ys.iter().sum::<f64>() / m as f64;
                    let cov: f64 = sig.iter().zip(&ys).map(|(x, y)| (x - mean_s) * (y - mean_y)).sum();
                    let beta = cov / var_s;
                    let alpha = mean_y - beta * mean_s;
                    max_intercept = max_intercept.max(alpha.abs());
                    for (x, y) in sig.iter().zip(&ys) {
                        max_fit = max_fit.max((alpha + beta * x - y).abs());
                    }
                    slopes.push(beta);
                }
            }
            let mean_beta = slopes.iter().sum::<f64>() / slopes.len() as f64;
            let spread = slopes.iter().fold(0.0_f64, |m, b| m.max((b - mean_beta).abs()));
            push("b12_intercept", max_intercept);
            push("b12_fit_residual", max_fit);
            push("b12_slope_spread", spread);
            slope_floor = Some(mean_beta.abs());
        }
        Some(_) => push("b12_fit_residual", f64::INFINITY),
        None => {
            let first = b12.iter().next().copied().unwrap_or(0.0);
            push("b12_unit", max_abs(&b12.mapv(|v| v.abs() - 1.0)));
            push("b12_constant", max_abs(&b12.mapv(|v| v - first)));
        }
    }

    let mut diagnostics: Vec<AnetDiagnostic> = diags
        .into_iter()
        .map(|(name, deviation, _)| AnetDiagnostic { pass: deviation <= tol, name, deviation, tol })
        .collect();
    if let Some(beta) = slope_floor {
        // Reported as the measured |slope|; passes when it clears the tolerance.
        diagnostics.push(AnetDiagnostic { name: "b12_slope_nonzero".into(), deviation: beta, tol, pass: beta > tol });
    }
    AnetVerdict { is_anet: diagnostics.iter().all(|d| d.pass), diagnostics }
}
