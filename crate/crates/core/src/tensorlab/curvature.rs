use crate::exec;
use crate::fieldcore::{max_abs_samples, SField, Sampling};
use crate::report::{ResidualEntry, ResidualReport};

use super::{TensorChart, TensorError};

/// Levi-Civita connection `Γ^a_{bc}` of a chart.
#[derive(Debug, Clone)]
pub struct Christoffel {
    n: usize,
    gamma: Vec<SField>,
}

impl Christoffel {
    /// `Γ^a_{bc}`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &SField {
        &self.gamma[(a * self.n + b) * self.n + c]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{bd} − ∂_d g_{bc})` for an orthogonal chart.
pub fn christoffel(chart: &TensorChart, sampling: &Sampling) -> Result<Christoffel, TensorError> {
    let n = chart.n();
    let (diag, inv) = chart.diagonal_metric()?;
    // dg[a * n + d] = ∂_d g_aa
    let mut dg = Vec::with_capacity(n * n);
    for g_aa in diag.iter() {
        for d in 0..n {
            dg.push(chart.partial(g_aa, d, sampling.order)?);
        }
    }
    let zero = SField::zero(*chart.grid());
    let mut gamma = vec![zero.clone(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut acc = zero.clone();
                if a == c {
                    acc = &acc + &dg[a * n + b];
                }
                if a == b {
                    acc = &acc + &dg[a * n + c];
                }
                if b == c {
                    acc = &acc - &dg[b * n + a];
                }
                if acc.is_zero() {
                    continue;
                }
                let v = (&inv[a] * &acc).scale(0.5);
                gamma[(a * n + c) * n + b] = v.clone();
                gamma[(a * n + b) * n + c] = v;
            }
        }
    }
    Ok(Christoffel { n, gamma })
}

/// Covariant curvature `R_{abcd} = ⟨R(∂_a, ∂_b)∂_c, ∂_d⟩` with
/// `R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`.
#[derive(Debug, Clone)]
pub struct Riemann {
    n: usize,
    r: Vec<SField>,
}

impl Riemann {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &SField {
        &self.r[((a * self.n + b) * self.n + c) * self.n + d]
    }
}

pub fn riemann(chart: &TensorChart, gamma: &Christoffel, sampling: &Sampling) -> Result<Riemann, TensorError> {
    let n = chart.n();
    let order = sampling.order;
    let (diag, inv) = chart.diagonal_metric()?;
    // ∂Γ is assembled from ∂g and ∂∂g rather than by differencing Γ: nesting two
    // first differences would degrade to O(h) next to the one-sided boundary ring.
    let zero = SField::zero(*chart.grid());
    let mut dmet = Vec::with_capacity(n * n);
    for g_dd in &diag {
        for a in 0..n {
            dmet.push(chart.partial(g_dd, a, order)?);
        }
    }
    let dmet = |c: usize, a: usize| &dmet[c * n + a];
    let pairs: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|c| (0..n).flat_map(move |a| (a..n).map(move |b| (c, a, b)))).collect();
    let dd = exec::map_indexed(pairs.len(), |k| {
        let (c, a, b) = pairs[k];
        chart.second_partial(&diag[c], a, b, order)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut ddmet = vec![zero.clone(); n * n * n];
    for ((c, a, b), v) in pairs.into_iter().zip(dd) {
        ddmet[(c * n + b) * n + a] = v.clone();
        ddmet[(c * n + a) * n + b] = v;
    }
    let ddmet = |c: usize, a: usize, b: usize| &ddmet[(c * n + a) * n + b];
    // ∂_a g^{dd} = −(g^{dd})² ∂_a g_dd
    let dinv: Vec<SField> = (0..n * n)
        .map(|k| {
            let (d, a) = (k / n, k % n);
            -&(&(&inv[d] * &inv[d]) * dmet(d, a))
        })
        .collect();
    // dgamma[((a * n + d) * n + b) * n + c] = ∂_a Γ^d_{bc}
    let dgamma: Vec<SField> = exec::map_indexed(n * n * n * n, |idx| {
        let c = idx % n;
        let b = (idx / n) % n;
        let d = (idx / (n * n)) % n;
        let a = idx / (n * n * n);
        // Γ^d_{bc} = ½ g^{dd} S_{dbc}, S_{dbc} = δ_dc ∂_b g_dd + δ_db ∂_c g_dd − δ_bc ∂_d g_bb
        let mut s = zero.clone();
        let mut ds = zero.clone();
        if d == c {
            s = &s + dmet(d, b);
            ds = &ds + ddmet(d, a, b);
        }
        if d == b {
            s = &s + dmet(d, c);
            ds = &ds + ddmet(d, a, c);
        }
        if b == c {
            s = &s - dmet(b, d);
            ds = &ds - ddmet(b, a, d);
        }
        if s.is_zero() && ds.is_zero() {
            return zero.clone();
        }
        (&(&dinv[d * n + a] * &s) + &(&inv[d] * &ds)).scale(0.5)
    });
    let dg = |a: usize, d: usize, b: usize, c: usize| &dgamma[((a * n + d) * n + b) * n + c];
    let r = exec::map_indexed(n * n * n * n, |idx| {
        let d = idx % n;
        let c = (idx / n) % n;
        let b = (idx / (n * n)) % n;
        let a = idx / (n * n * n);
        if a == b {
            return SField::zero(*chart.grid());
        }
        // R^d_{cab}
        let mut up = dg(a, d, b, c) - dg(b, d, a, c);
        for e in 0..n {
            up = &up + &(gamma.get(d, a, e) * gamma.get(e, b, c));
            up = &up - &(gamma.get(d, b, e) * gamma.get(e, a, c));
        }
        &diag[d] * &up
    });
    Ok(Riemann { n, r })
}

/// Max over all `(a, b, c, d)` of `|R_abcd − (b_bc b_ad − b_ac b_bd)|`.
pub fn gauss_general_residual(chart: &TensorChart, sampling: &Sampling) -> Result<ResidualReport, TensorError> {
    let n = chart.n();
    let gamma = christoffel(chart, sampling)?;
    let rm = riemann(chart, &gamma, sampling)?;
    let diffs = exec::map_indexed(n * n * n * n, |idx| {
        let d = idx % n;
        let c = (idx / n) % n;
        let b = (idx / (n * n)) % n;
        let a = idx / (n * n * n);
        let rhs = &(chart.b(b, c) * chart.b(a, d)) - &(chart.b(a, c) * chart.b(b, d));
        rm.get(a, b, c, d) - &rhs
    });
    let samples = max_abs_samples(chart.grid(), &diffs, &sampling.sigmas);
    let mut report = ResidualReport::new();
    report.push(ResidualEntry::from_samples("gauss_general", "oracle", chart.grid(), &samples));
    Ok(report)
}

/// Max over `a < b` and all `c` of `|∇_a b_bc − ∇_b b_ac|`.
pub fn codazzi_general_residual(chart: &TensorChart, sampling: &Sampling) -> Result<ResidualReport, TensorError> {
    let n = chart.n();
    let gamma = christoffel(chart, sampling)?;
    let cov = |a: usize, b: usize, c: usize| -> Result<SField, TensorError> {
        let mut v = chart.partial(chart.b(b, c), a, sampling.order)?;
        for e in 0..n {
            v = &v - &(gamma.get(e, a, b) * chart.b(e, c));
            v = &v - &(gamma.get(e, a, c) * chart.b(b, e));
        }
        Ok(v)
    };
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect();
    let diffs = exec::map_indexed(triples.len(), |k| {
        let (a, b, c) = triples[k];
        Ok::<_, TensorError>(&cov(a, b, c)? - &cov(b, a, c)?)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let samples = max_abs_samples(chart.grid(), &diffs, &sampling.sigmas);
    let mut report = ResidualReport::new();
    report.push(ResidualEntry::from_samples("codazzi_general", "oracle", chart.grid(), &samples));
    Ok(report)
}

/// Largest `|R_abcd + R_bcad + R_cabd|` over all indices and samples.
pub fn first_bianchi_residual(chart: &TensorChart, sampling: &Sampling) -> Result<f64, TensorError> {
    let n = chart.n();
    let gamma = christoffel(chart, sampling)?;
    let rm = riemann(chart, &gamma, sampling)?;
    let sums = exec::map_indexed(n * n * n * n, |idx| {
        let d = idx % n;
        let c = (idx / n) % n;
        let b = (idx / (n * n)) % n;
        let a = idx / (n * n * n);
        &(rm.get(a, b, c, d) + rm.get(b, c, a, d)) + rm.get(c, a, b, d)
    });
    let samples = max_abs_samples(chart.grid(), &sums, &sampling.sigmas);
    Ok(samples.iter().copied().fold(0.0, f64::max))
}
