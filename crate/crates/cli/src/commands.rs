use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use bonnetlab::bonnet::{check_suite, constraint_residuals, construct_pair, verify_pair, FundamentalPair};
use bonnetlab::fieldcore::{format_value, read_grid_csv, write_grid_csv, Grid2, Grid3, Sampling};
use bonnetlab::report::{Bound, ResidualEntry, ResidualReport};
use bonnetlab::solver::{least_squares_solve, RowSet, SolveError, SolveResult};
use bonnetlab::tensorlab::{
    codazzi_general_residual, detect_anet, gauss_general_residual, FundamentalData, LinearFactor, SeparableComponent,
    TensorChart,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::scenario::{self, CaseSpec, Loaded, VariantSpec, DEFAULT_CHECK_TOL, SCHEMA_VERSION};
use crate::svg;

/// Quantitative verdict of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(CliError::io(path))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

// ---------------------------------------------------------------- construct

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRef {
    pub file: String,
    pub s_power: i32,
}

/// `g22 = g11` and `g_pp = 1` are implied.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Components {
    pub g11: ComponentRef,
    pub b11: ComponentRef,
    pub b22: ComponentRef,
    pub b12: ComponentRef,
}

pub const MANIFEST_KIND: &str = "fundamental-pair";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: u64,
    pub kind: String,
    pub name: String,
    pub n: usize,
    pub case: CaseSpec,
    pub grid: Grid2,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<(f64, f64, usize)>,
    pub variant: VariantSpec,
    pub epsilon: f64,
    pub m: Components,
    pub m_prime: Components,
    pub verify_pass: bool,
    pub verify_failures: Vec<String>,
    /// Seconds since the Unix epoch; the only non-deterministic byte range in any output.
    pub generated_unix: u64,
}

fn write_components(dir: &Path, prefix: &str, fd: &FundamentalData) -> Result<Components, CliError> {
    let one = |name: &str, c: &SeparableComponent| -> Result<ComponentRef, CliError> {
        let file = format!("{prefix}_{name}.csv");
        let notes = [format!("component={name}"), format!("s_power={}", c.s_power), "value=base*s^s_power".to_string()];
        write(&dir.join(&file), write_grid_csv(&c.base, &notes))?;
        Ok(ComponentRef { file, s_power: c.s_power })
    };
    Ok(Components {
        g11: one("g11", &fd.g11)?,
        b11: one("b11", &fd.b11)?,
        b22: one("b22", &fd.b22)?,
        b12: one("b12", &fd.b12)?,
    })
}

pub fn construct(
    scenario: &Path,
    out: &Path,
    variant: Option<VariantSpec>,
    tol: Option<f64>,
) -> Result<Outcome, CliError> {
    let loaded = scenario::load(scenario)?;
    let variant = variant.unwrap_or(loaded.variant());
    let tol = tol.or(loaded.tolerances().check).unwrap_or(DEFAULT_CHECK_TOL);
    let pair: FundamentalPair = construct_pair(&loaded.fields, variant.into())?;
    let report = verify_pair(&pair, tol, &loaded.sampling)?;

    ensure_dir(out)?;
    let manifest = Manifest {
        schema: SCHEMA_VERSION,
        kind: MANIFEST_KIND.into(),
        name: loaded.scenario.name.clone(),
        n: loaded.scenario.n,
        case: loaded.scenario.case.clone(),
        grid: *loaded.fields.grid(),
        sigma: loaded.grid3.map(|g| (g.sigma_min, g.sigma_max, g.n3)),
        variant,
        epsilon: pair.m.epsilon,
        m: write_components(out, "m", &pair.m)?,
        m_prime: write_components(out, "mprime", &pair.m_prime)?,
        verify_pass: report.all_pass(),
        verify_failures: report.failures().map(|e| e.name.clone()).collect(),
        generated_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    };
    write(&out.join("manifest.json"), to_json(&manifest))?;
    Ok(Outcome::from_pass(manifest.verify_pass))
}

// ---------------------------------------------------------------- check

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutput {
    pub schema: u64,
    pub name: String,
    pub tol: f64,
    pub interior_only: bool,
    pub all_pass: bool,
    pub entries: Vec<ResidualEntry>,
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub tol: Option<f64>,
    pub interior_only: bool,
    pub variant: Option<VariantSpec>,
}

fn anet_entry(
    name: &str,
    chart: &TensorChart,
    hypothesis: Option<&LinearFactor>,
    sampling: &Sampling,
    tol: f64,
) -> ResidualEntry {
    let verdict = detect_anet(chart, hypothesis, sampling, tol.max(1e-9));
    let failed = verdict.diagnostics.iter().filter(|d| !d.pass).count();
    ResidualEntry::scalar(name, "anet", failed as f64).with_bound(Bound::AtMost(0.0))
}

/// Residual report for a scenario or a construct manifest, judged at `tol`.
pub fn check_report(input: &Path, opts: &CheckOptions) -> Result<CheckOutput, CliError> {
    let value: serde_json::Value = scenario::read_json(input)?;
    let is_manifest = value.get("kind").and_then(|k| k.as_str()) == Some(MANIFEST_KIND);
    let (name, mut report, default_tol, default_interior) = if is_manifest {
        let manifest: Manifest = serde_json::from_value(value)
            .map_err(|e| CliError::Json { path: input.to_owned(), message: e.to_string() })?;
        let tol = opts.tol.unwrap_or(DEFAULT_CHECK_TOL);
        let r = check_manifest(&manifest, input.parent().unwrap_or(Path::new(".")), tol)?;
        (manifest.name, r, DEFAULT_CHECK_TOL, false)
    } else {
        let loaded = scenario::load(input)?;
        let variant = opts.variant.unwrap_or(loaded.variant());
        let tols = loaded.tolerances();
        let tol = opts.tol.or(tols.check).unwrap_or(DEFAULT_CHECK_TOL);
        let mut r = check_suite(&loaded.fields, variant.into(), &loaded.sampling)?;
        let pair = construct_pair(&loaded.fields, variant.into())?;
        let linfac = loaded.fields.case().linfac();
        r.push(anet_entry("anet_violations", &pair.m.to_chart()?, linfac, &loaded.sampling, tol));
        (loaded.scenario.name.clone(), r, tols.check.unwrap_or(DEFAULT_CHECK_TOL), tols.interior_only.unwrap_or(false))
    };
    let tol = opts.tol.unwrap_or(default_tol);
    let interior_only = opts.interior_only || default_interior;
    report.judge(tol, interior_only);
    Ok(CheckOutput {
        schema: SCHEMA_VERSION,
        name,
        tol,
        interior_only,
        all_pass: report.all_pass(),
        entries: report.entries,
    })
}

fn check_manifest(m: &Manifest, base: &Path, tol: f64) -> Result<ResidualReport, CliError> {
    let linfac = match &m.case {
        CaseSpec::Two => None,
        CaseSpec::One { c } => Some(LinearFactor::new(c.clone())?),
    };
    let sampling = match (&linfac, m.sigma) {
        (Some(_), Some(s)) => Sampling::grid3(&Grid3::new(m.grid, s)?),
        (Some(_), None) => return Err(CliError::Scenario("case one manifest needs `sigma`".into())),
        (None, _) => Sampling::plane(),
    };
    let load = |r: &ComponentRef| -> Result<SeparableComponent, CliError> {
        let p = base.join(&r.file);
        let text = fs::read_to_string(&p).map_err(CliError::io(&p))?;
        let f = read_grid_csv(&text)?.field;
        if f.grid() != &m.grid {
            return Err(CliError::Scenario(format!("{}: grid differs from the manifest grid", p.display())));
        }
        Ok(SeparableComponent::new(f, r.s_power)?)
    };
    let mut report = ResidualReport::new();
    for (prefix, c, eps) in [("M.", &m.m, m.epsilon), ("M'.", &m.m_prime, -m.epsilon)] {
        let fd = FundamentalData {
            n: m.n,
            linfac: linfac.clone(),
            g11: load(&c.g11)?,
            b11: load(&c.b11)?,
            b22: load(&c.b22)?,
            b12: load(&c.b12)?,
            epsilon: eps,
        };
        let chart = fd.to_chart()?;
        let mut r = gauss_general_residual(&chart, &sampling)?;
        r.extend(codazzi_general_residual(&chart, &sampling)?);
        r.push(anet_entry("anet_violations", &chart, linfac.as_ref(), &sampling, tol));
        report.extend(r.prefixed(prefix));
    }
    Ok(report)
}

pub fn check(input: &Path, opts: &CheckOptions, out: Option<&Path>) -> Result<(Outcome, String), CliError> {
    let output = check_report(input, opts)?;
    let json = to_json(&output);
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write(&dir.join("check.json"), &json)?;
    }
    Ok((Outcome::from_pass(output.all_pass), json))
}

// ---------------------------------------------------------------- solve

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOutput {
    pub schema: u64,
    pub name: String,
    pub status: String,
    pub converged: bool,
    pub iterations: usize,
    pub final_linf: f64,
    pub tol: f64,
    pub entries: Vec<ResidualEntry>,
}

pub fn solve(scenario: &Path, out: &Path, tol: Option<f64>) -> Result<Outcome, CliError> {
    let loaded: Loaded = scenario::load(scenario)?;
    let spec = loaded.scenario.solve.as_ref().ok_or(CliError::NoSolveSection)?;
    let mut config = spec.config();
    if let Some(t) = tol {
        config.tol = t;
    }
    let (status, result): (&str, SolveResult) = match least_squares_solve(&config, &loaded.fields) {
        Ok(r) if r.converged => ("converged", r),
        Ok(r) => ("max_iter", r),
        Err(SolveError::NoProgress { result }) => ("no_progress", *result),
        Err(SolveError::InvariantBreach { result }) => ("invariant_breach", *result),
        Err(e) => return Err(e.into()),
    };

    ensure_dir(out)?;
    let f = &result.fields;
    for (file, field) in [("frakH.csv", f.frak_h()), ("frakJ.csv", f.frak_j()), ("theta.csv", f.theta())] {
        write(&out.join(file), write_grid_csv(field, &[format!("solved {}", loaded.scenario.name)]))?;
    }
    let mut history = String::from("iteration,linf,l2\n");
    for (k, (linf, l2)) in result.history.iter().zip(&result.history_l2).enumerate() {
        writeln!(history, "{k},{},{}", format_value(*linf), format_value(*l2)).unwrap();
    }
    write(&out.join("history.csv"), history)?;

    let mut report = constraint_residuals(f, config.order)?.report();
    report.judge(config.tol, config.rows == RowSet::Interior);
    let output = SolveOutput {
        schema: SCHEMA_VERSION,
        name: loaded.scenario.name.clone(),
        status: status.into(),
        converged: result.converged,
        iterations: result.iterations,
        final_linf: result.final_residual(),
        tol: config.tol,
        entries: report.entries,
    };
    write(&out.join("report.json"), to_json(&output))?;
    Ok(Outcome::from_pass(result.converged))
}

// ---------------------------------------------------------------- report

#[derive(Debug, Clone, Deserialize)]
struct ReportInput {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    entries: Vec<ResidualEntry>,
}

pub fn report(input: &Path, out: &Path) -> Result<Outcome, CliError> {
    let parsed: ReportInput = scenario::read_json(input)?;
    if parsed.entries.is_empty() {
        return Err(CliError::EmptyReport);
    }
    ensure_dir(out)?;
    let title = parsed.name.unwrap_or_else(|| "residuals".into());
    let mut summary = String::new();
    writeln!(summary, "{title}: {} residuals", parsed.entries.len()).unwrap();
    writeln!(summary, "{:<4} {:<56} {:>12} {:>12} {:>12}  verdict", "#", "name", "linf", "interior", "l2").unwrap();
    let mut all_pass = true;
    for (k, e) in parsed.entries.iter().enumerate() {
        let verdict = match e.pass {
            Some(true) => "pass",
            Some(false) => {
                all_pass = false;
                "FAIL"
            }
            None => "-",
        };
        let bound = match e.bound {
            Some(Bound::AtMost(t)) => format!(" (<= {t:e})"),
            Some(Bound::AtLeast(t)) => format!(" (>= {t:e})"),
            None => String::new(),
        };
        writeln!(
            summary,
            "{k:<4} {:<56} {:>12.4e} {:>12.4e} {:>12.4e}  {verdict}{bound}",
            e.name, e.full.linf, e.interior.linf, e.full.l2
        )
        .unwrap();
        if let Some(dump) = &e.field {
            if dump.values.len() != dump.grid.n1 * dump.grid.n2 {
                return Err(CliError::Scenario(format!("entry {}: field dump does not match its grid", e.name)));
            }
            let file: PathBuf = out.join(format!("{k:02}_{}.svg", svg::slug(&e.name)));
            write(&file, svg::heatmap(&format!("{title}: {}", e.name), dump))?;
        }
    }
    writeln!(summary, "overall: {}", if all_pass { "pass" } else { "FAIL" }).unwrap();
    write(&out.join("summary.txt"), summary)?;
    Ok(Outcome::from_pass(all_pass))
}
