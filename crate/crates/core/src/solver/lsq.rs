use ndarray::Array2;

use crate::bonnet::{constraint_fields, BonnetFields, ADMISSIBLE_MIN};
use crate::exec;
use crate::fieldcore::{NormPair, ScalarField2, StencilOrder};

use super::banded::BandedSpd;
use super::{field_of, FieldId, RowSet, SolveConfig, SolveError, SolveResult};

/// Trial steps per iteration before the damping is declared exhausted.
const MAX_REJECTIONS: usize = 16;
const LAMBDA_UP: f64 = 10.0;
const LAMBDA_DOWN: f64 = 10.0;

/// Damped Gauss–Newton on the stacked constraint residuals `(c1, c2, c3)` at
/// every selected node plus one row `x − value` per anchor.
///
/// Damping is Marquardt-scaled (`λ·diag JᵀJ`): `c3` carries second
/// differences, so its columns are `O(1/h)` heavier than those of `c1`, `c2`,
/// and a uniform `λI` would stall the first-order directions.
///
/// A step is accepted only if it keeps `|𝕳|, |𝕵|, sin θ ≥ 1e−9`, lowers the
/// rms residual and does not raise the max residual; otherwise the Levenberg
/// parameter grows tenfold. Grid and case come from `initial`.
pub fn least_squares_solve(config: &SolveConfig, initial: &BonnetFields) -> Result<SolveResult, SolveError> {
    let problem = Problem::new(config, initial)?;
    let mut x = problem.initial_unknowns();
    let mut r = problem.residual(&x)?;
    let mut norms = norms(&r);
    let mut history = vec![norms.linf];
    let mut history_l2 = vec![norms.l2];
    let mut iterations = 0;

    let finish = |x: &[f64], history: Vec<f64>, history_l2: Vec<f64>, iterations: usize| {
        let converged = history.last().is_some_and(|&v| v <= config.tol);
        Ok::<_, SolveError>(SolveResult { fields: problem.fields(x)?, history, history_l2, converged, iterations })
    };

    if norms.linf <= config.tol {
        return finish(&x, history, history_l2, 0);
    }
    if problem.ncols == 0 {
        let result = finish(&x, history, history_l2, 0)?;
        return Err(SolveError::NoProgress { result: Box::new(result) });
    }

    let mut lambda: Option<f64> = None;
    while iterations < config.max_iter {
        let jac = problem.jacobian(&x, &r)?;
        let (normal, grad) = jac.normal_equations(&r);
        let diag: Vec<f64> = (0..problem.ncols).map(|c| normal.diag(c)).collect();
        let mean = diag.iter().sum::<f64>() / diag.len() as f64;
        let floor = 1e-12 * if mean > 0.0 { mean } else { 1.0 };
        let mut lam = lambda.unwrap_or(config.damping);

        let mut accepted = None;
        let mut any_admissible = false;
        for _ in 0..MAX_REJECTIONS {
            let mut a = normal.clone();
            for (c, d) in diag.iter().enumerate() {
                a.add_diag(c, lam * d.max(floor));
            }
            let step = match a.cholesky() {
                Ok(f) => f.solve(&grad),
                Err(_) => {
                    lam *= LAMBDA_UP;
                    continue;
                }
            };
            let trial: Vec<f64> = x.iter().zip(&step).map(|(x, s)| x - s).collect();
            if !problem.admissible(&trial) {
                lam *= LAMBDA_UP;
                continue;
            }
            any_admissible = true;
            let rt = match problem.residual(&trial) {
                Ok(rt) => rt,
                Err(_) => {
                    lam *= LAMBDA_UP;
                    continue;
                }
            };
            let nt = self::norms(&rt);
            if nt.l2 < norms.l2 && nt.linf <= norms.linf {
                accepted = Some((trial, rt, nt));
                break;
            }
            lam *= LAMBDA_UP;
        }

        let Some((trial, rt, nt)) = accepted else {
            let result = Box::new(finish(&x, history, history_l2, iterations)?);
            return Err(if any_admissible {
                SolveError::NoProgress { result }
            } else {
                SolveError::InvariantBreach { result }
            });
        };
        debug_assert!(nt.linf <= norms.linf);
        x = trial;
        r = rt;
        norms = nt;
        history.push(norms.linf);
        history_l2.push(norms.l2);
        iterations += 1;
        lambda = Some((lam / LAMBDA_DOWN).max(1e-12));
        if norms.linf <= config.tol {
            break;
        }
    }
    finish(&x, history, history_l2, iterations)
}

fn norms(r: &[f64]) -> NormPair {
    NormPair::from_values(r.iter().copied()).unwrap_or_default()
}

/// Discretized residual map `x ↦ F(x)` with its sparsity structure.
struct Problem<'a> {
    initial: &'a BonnetFields,
    /// Unknown fields in slot order.
    slots: Vec<FieldId>,
    anchors: Vec<(usize, f64)>,
    order: StencilOrder,
    kappa: f64,
    shape: (usize, usize),
    /// Selected row nodes `[lo, hi1) × [lo, hi2)`.
    lo: usize,
    hi: (usize, usize),
    /// Half-width of the (cross-shaped) dependency footprint of one unknown.
    reach: usize,
    ncols: usize,
}

impl<'a> Problem<'a> {
    fn new(config: &SolveConfig, initial: &'a BonnetFields) -> Result<Self, SolveError> {
        if !(config.tol > 0.0) {
            return Err(SolveError::Config(format!("tol must be positive, got {}", config.tol)));
        }
        if !(config.damping > 0.0) {
            return Err(SolveError::Config(format!("damping must be positive, got {}", config.damping)));
        }
        let mut slots = config.unknowns.clone();
        slots.sort();
        slots.dedup();
        let (n1, n2) = initial.grid().shape();
        let mut anchors = Vec::with_capacity(config.anchors.len());
        for a in &config.anchors {
            if a.i >= n1 || a.j >= n2 {
                return Err(SolveError::Config(format!("anchor node ({}, {}) outside {n1}×{n2} grid", a.i, a.j)));
            }
            let Some(slot) = slots.iter().position(|&s| s == a.field) else {
                return Err(SolveError::Config(format!("anchor on frozen field {}", a.field.name())));
            };
            if !a.value.is_finite() {
                return Err(SolveError::Config(format!("anchor value {} is not finite", a.value)));
            }
            anchors.push(((a.i * n2 + a.j) * slots.len() + slot, a.value));
        }
        if let Some(&f) = slots.iter().find(|&&f| !config.anchors.iter().any(|a| a.field == f)) {
            return Err(SolveError::NoAnchor(f));
        }
        let (lo, hi) = match config.rows {
            RowSet::Interior => (1, (n1 - 1, n2 - 1)),
            RowSet::All => (0, (n1, n2)),
        };
        let reach = match (config.rows, config.order) {
            (RowSet::Interior, StencilOrder::Second) => 1,
            (RowSet::Interior, StencilOrder::Fourth) => 2,
            // One-sided boundary stencils reach three nodes inward.
            (RowSet::All, _) => 3,
        };
        Ok(Problem {
            initial,
            ncols: n1 * n2 * slots.len(),
            slots,
            anchors,
            order: config.order,
            kappa: initial.case().kappa(),
            shape: (n1, n2),
            lo,
            hi,
            reach,
        })
    }

    fn nu(&self) -> usize {
        self.slots.len()
    }

    fn node_rows(&self) -> usize {
        3 * (self.hi.0 - self.lo) * (self.hi.1 - self.lo)
    }

    fn initial_unknowns(&self) -> Vec<f64> {
        let (n1, n2) = self.shape;
        let mut x = vec![0.0; self.ncols];
        for (slot, &id) in self.slots.iter().enumerate() {
            let f = field_of(self.initial, id);
            for i in 0..n1 {
                for j in 0..n2 {
                    x[(i * n2 + j) * self.nu() + slot] = f.at(i, j);
                }
            }
        }
        x
    }

    /// `(𝕳, 𝕵, θ)` node arrays with the unknown slots overwritten by `x`.
    fn arrays(&self, x: &[f64]) -> [Array2<f64>; 3] {
        let (n1, n2) = self.shape;
        let mut out = FieldId::ALL.map(|id| field_of(self.initial, id).values().clone());
        for (slot, &id) in self.slots.iter().enumerate() {
            let a = &mut out[id.index()];
            for i in 0..n1 {
                for j in 0..n2 {
                    a[[i, j]] = x[(i * n2 + j) * self.nu() + slot];
                }
            }
        }
        out
    }

    fn fields(&self, x: &[f64]) -> Result<BonnetFields, SolveError> {
        let grid = *self.initial.grid();
        let [h, j, t] = self.arrays(x);
        Ok(BonnetFields::new(
            ScalarField2::new(grid, h)?,
            ScalarField2::new(grid, j)?,
            ScalarField2::new(grid, t)?,
            self.initial.case().clone(),
            self.initial.n(),
        )?)
    }

    /// Sign invariants of the generating data, with `sgn 𝕵` pinned to the initial data.
    fn admissible(&self, x: &[f64]) -> bool {
        let eps = self.initial.epsilon();
        let nu = self.nu();
        self.slots.iter().enumerate().all(|(slot, &id)| {
            x.iter().skip(slot).step_by(nu).all(|&v| match id {
                FieldId::FrakH => v.abs() >= ADMISSIBLE_MIN,
                FieldId::FrakJ => v * eps >= ADMISSIBLE_MIN,
                FieldId::Theta => v > 0.0 && v < std::f64::consts::PI && v.sin() >= ADMISSIBLE_MIN,
            })
        })
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, SolveError> {
        let grid = *self.initial.grid();
        let [h, j, t] = self.arrays(x);
        let [c1, c2, c3] = constraint_fields(
            &ScalarField2::new(grid, h)?,
            &ScalarField2::new(grid, j)?,
            &ScalarField2::new(grid, t)?,
            self.kappa,
            self.order,
        )?;
        let mut r = Vec::with_capacity(self.node_rows() + self.anchors.len());
        for i in self.lo..self.hi.0 {
            for j in self.lo..self.hi.1 {
                r.extend([c1.at(i, j), c2.at(i, j), c3.at(i, j)]);
            }
        }
        r.extend(self.anchors.iter().map(|&(c, v)| x[c] - v));
        Ok(r)
    }

    /// Row index of the first equation at node `(i, j)`, if that node is selected.
    fn row_of(&self, i: usize, j: usize) -> Option<usize> {
        let w = self.hi.1 - self.lo;
        ((self.lo..self.hi.0).contains(&i) && (self.lo..self.hi.1).contains(&j))
            .then(|| 3 * ((i - self.lo) * w + (j - self.lo)))
    }

    /// Selected nodes whose residuals may depend on the unknowns at `(i, j)`.
    fn footprint(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        let (n1, n2) = self.shape;
        let r = self.reach;
        let along1 = (i.saturating_sub(r)..(i + r + 1).min(n1)).map(move |a| (a, j));
        let along2 = (j.saturating_sub(r)..(j + r + 1).min(n2)).filter(move |&b| b != j).map(move |b| (i, b));
        along1.chain(along2).filter_map(move |(a, b)| self.row_of(a, b))
    }

    /// Forward-difference Jacobian. Unknowns sharing `(i mod p, j mod p, slot)`
    /// with `p = 2·reach + 1` have disjoint footprints and are perturbed together.
    fn jacobian(&self, x: &[f64], r0: &[f64]) -> Result<SparseJacobian, SolveError> {
        let (n1, n2) = self.shape;
        let nu = self.nu();
        let p = 2 * self.reach + 1;
        let colors = p * p * nu;
        let step = |v: f64| 1e-7 * v.abs().max(1.0);

        let columns = exec::map_indexed(colors, |color| -> Result<Vec<(usize, usize, f64)>, SolveError> {
            let (ci, cj, slot) = (color / (p * nu), (color / nu) % p, color % nu);
            let nodes: Vec<(usize, usize)> =
                (ci..n1).step_by(p).flat_map(|i| (cj..n2).step_by(p).map(move |j| (i, j))).collect();
            let mut xp = x.to_vec();
            for &(i, j) in &nodes {
                let c = (i * n2 + j) * nu + slot;
                xp[c] += step(x[c]);
            }
            let rp = self.residual(&xp)?;
            let mut entries = Vec::new();
            for &(i, j) in &nodes {
                let c = (i * n2 + j) * nu + slot;
                let d = xp[c] - x[c];
                for row in self.footprint(i, j) {
                    for k in row..row + 3 {
                        let v = (rp[k] - r0[k]) / d;
                        if v != 0.0 {
                            entries.push((k, c, v));
                        }
                    }
                }
            }
            Ok(entries)
        });

        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); r0.len()];
        for entries in columns {
            for (k, c, v) in entries? {
                rows[k].push((c, v));
            }
        }
        let base = self.node_rows();
        for (k, &(c, _)) in self.anchors.iter().enumerate() {
            rows[base + k].push((c, 1.0));
        }
        Ok(SparseJacobian { ncols: self.ncols, rows })
    }
}

struct SparseJacobian {
    ncols: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseJacobian {
    /// `(JᵀJ, Jᵀr)`; the band width is read off the sparsity pattern.
    fn normal_equations(&self, r: &[f64]) -> (BandedSpd, Vec<f64>) {
        let bw = self
            .rows
            .iter()
            .filter_map(|row| {
                let lo = row.iter().map(|e| e.0).min()?;
                let hi = row.iter().map(|e| e.0).max()?;
                Some(hi - lo)
            })
            .max()
            .unwrap_or(0);
        let mut a = BandedSpd::zeros(self.ncols, bw);
        let mut g = vec![0.0; self.ncols];
        for (row, &rk) in self.rows.iter().zip(r) {
            for (m, &(c, v)) in row.iter().enumerate() {
                g[c] += v * rk;
                for &(c2, v2) in &row[m..] {
                    a.add(c, c2, v * v2);
                }
            }
        }
        (a, g)
    }
}
