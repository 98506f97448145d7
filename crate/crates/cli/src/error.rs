use std::io;
use std::path::PathBuf;

use bonnetlab::bonnet::BonnetError;
use bonnetlab::exprlang::ExprError;
use bonnetlab::fieldcore::FieldError;
use bonnetlab::solver::SolveError;
use bonnetlab::tensorlab::TensorError;
use serde::Serialize;
use thiserror::Error;

/// Input or configuration errors. Every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {message}", path.display())]
    Json { path: PathBuf, message: String },
    #[error("unsupported schema version {0} (expected 1)")]
    SchemaVersion(u64),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("linear factor vanishes on the sampled range: {0}")]
    SZero(String),
    #[error("scenario has no `solve` section")]
    NoSolveSection,
    #[error("residual file has no entries")]
    EmptyReport,
    #[error("BONNETLAB_THREADS={0:?} is not a positive integer")]
    Threads(String),
    #[error(transparent)]
    Bonnet(#[from] BonnetError),
    #[error(transparent)]
    Solve(SolveError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Bonnet(b) => CliError::Bonnet(b),
            other => CliError::Solve(other),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IO_ERROR",
            CliError::Json { .. } => "JSON_INVALID",
            CliError::SchemaVersion(_) => "SCHEMA_VERSION",
            CliError::Scenario(_) => "SCENARIO_INVALID",
            CliError::SZero(_) => "DOMAIN_S_ZERO",
            CliError::NoSolveSection => "CONFIG_NO_SOLVE",
            CliError::EmptyReport => "REPORT_EMPTY",
            CliError::Threads(_) => "ENV_INVALID",
            CliError::Bonnet(BonnetError::Invariant { kind, .. }) => kind.code(),
            CliError::Bonnet(BonnetError::Field(FieldError::Domain(_))) | CliError::Field(FieldError::Domain(_)) => {
                "DOMAIN_S_ZERO"
            }
            CliError::Bonnet(_) | CliError::Tensor(_) => "GEOMETRY",
            CliError::Solve(e) => e.code(),
            CliError::Field(FieldError::Csv(_)) => "CSV_INVALID",
            CliError::Field(_) => "FIELD_INVALID",
            CliError::Expr(_) => "EXPRESSION_INVALID",
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// The machine-readable report written to stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            code: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Envelope<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Envelope { error: Body { code: self.code(), message: self.to_string() } })
            .expect("error envelope serializes")
    }
}
