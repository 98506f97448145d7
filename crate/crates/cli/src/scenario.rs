//! Scenario files: versioned JSON describing one set of generating data.
//!
//! ```json
//! { "schema": 1, "name": "example-a", "n": 3,
//!   "case": {"type": "two"},
//!   "grid": {"x1": [0, 1, 33], "x2": [0, 1, 33]},
//!   "fields": {"frakH": "1", "frakJ": "1", "theta": "pi/2"} }
//! ```
//!
//! Case 1 needs `"case": {"type": "one", "C": [..]}` and a `sigma` range in the grid.
//! A field may instead be `{"csv": "path"}`, relative to the scenario file.

use std::fs;
use std::path::{Path, PathBuf};

use bonnetlab::bonnet::{BonnetFields, Case, Variant};
use bonnetlab::exprlang::{parse, sample};
use bonnetlab::fieldcore::{read_grid_csv, Grid2, Grid3, Sampling, ScalarField2};
use bonnetlab::solver::{Anchor, FieldId, RowSet, SolveConfig};
use bonnetlab::tensorlab::LinearFactor;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u64,
    pub name: String,
    pub n: usize,
    pub case: CaseSpec,
    pub grid: GridSpec,
    pub fields: FieldSpecs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<VariantSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CaseSpec {
    One {
        #[serde(rename = "C")]
        c: Vec<f64>,
    },
    Two,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x1: (f64, f64, usize),
    pub x2: (f64, f64, usize),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<(f64, f64, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpecs {
    #[serde(rename = "frakH")]
    pub frak_h: FieldSource,
    #[serde(rename = "frakJ")]
    pub frak_j: FieldSource,
    pub theta: FieldSource,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSource {
    Expr(String),
    Csv(CsvRef),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvRef {
    pub csv: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum VariantSpec {
    #[default]
    DerivationConsistent,
    AsPrinted,
}

impl From<VariantSpec> for Variant {
    fn from(v: VariantSpec) -> Self {
        match v {
            VariantSpec::DerivationConsistent => Variant::DerivationConsistent,
            VariantSpec::AsPrinted => Variant::AsPrinted,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_only: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSpec {
    pub unknowns: Vec<FieldId>,
    pub anchors: Vec<Anchor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<RowSet>,
}

impl SolveSpec {
    pub fn config(&self) -> SolveConfig {
        let mut c = SolveConfig::new(self.unknowns.clone(), self.anchors.clone());
        if let Some(t) = self.tol {
            c.tol = t;
        }
        if let Some(m) = self.max_iter {
            c.max_iter = m;
        }
        if let Some(d) = self.damping {
            c.damping = d;
        }
        if let Some(r) = self.rows {
            c.rows = r;
        }
        c
    }
}

/// A validated scenario with its fields sampled.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub scenario: Scenario,
    pub fields: BonnetFields,
    pub sampling: Sampling,
    pub grid3: Option<Grid3>,
}

impl Loaded {
    pub fn variant(&self) -> VariantSpec {
        self.scenario.variant.unwrap_or_default()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.scenario.tolerances.unwrap_or_default()
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json { path: path.to_owned(), message: e.to_string() })
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let value: serde_json::Value = read_json(path)?;
    // Check the version before the shape, so old files fail with a clear code.
    match value.get("schema").and_then(serde_json::Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(CliError::SchemaVersion(v)),
        None => return Err(CliError::Scenario("missing integer `schema`".into())),
    }
    let scenario: Scenario =
        serde_json::from_value(value).map_err(|e| CliError::Json { path: path.to_owned(), message: e.to_string() })?;
    let base = path.parent().unwrap_or(Path::new("."));
    build(scenario, base)
}

/// Validate `scenario` and sample its fields; CSV paths resolve against `base`.
pub fn build(scenario: Scenario, base: &Path) -> Result<Loaded, CliError> {
    let g = scenario.grid;
    let grid = Grid2::new(g.x1, g.x2)?;
    let case = match &scenario.case {
        CaseSpec::Two => Case::Two,
        CaseSpec::One { c } => Case::One(LinearFactor::new(c.clone())?),
    };
    let (sampling, grid3) = match (&case, g.sigma) {
        (Case::Two, _) => (Sampling::plane(), None),
        (Case::One(_), None) => return Err(CliError::Scenario("case one needs a `sigma` range in `grid`".into())),
        (Case::One(_), Some((lo, hi, n3))) => {
            if lo.is_nan() || lo <= 0.0 {
                return Err(CliError::SZero(format!("sigma range [{lo}, {hi}] must stay above 0")));
            }
            let g3 = Grid3::new(grid, (lo, hi, n3))?;
            (Sampling::grid3(&g3), Some(g3))
        }
    };
    let field = |src: &FieldSource| -> Result<ScalarField2, CliError> {
        match src {
            FieldSource::Expr(text) => Ok(sample(&parse(text)?, &grid)?),
            FieldSource::Csv(r) => {
                let p = base.join(&r.csv);
                let text = fs::read_to_string(&p).map_err(CliError::io(&p))?;
                let f = read_grid_csv(&text)?.field;
                if f.grid() != &grid {
                    return Err(CliError::Scenario(format!("{}: grid differs from the scenario grid", p.display())));
                }
                Ok(f)
            }
        }
    };
    let fields = BonnetFields::new(
        field(&scenario.fields.frak_h)?,
        field(&scenario.fields.frak_j)?,
        field(&scenario.fields.theta)?,
        case,
        scenario.n,
    )?;
    Ok(Loaded { scenario, fields, sampling, grid3 })
}
