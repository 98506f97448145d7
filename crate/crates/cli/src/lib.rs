//! Batch front end: scenario ingestion, command dispatch, reports and heatmaps.
//!
//! Exit codes: 0 pass, 1 quantitative failure, 2 input or configuration error
//! (with a JSON error object on stderr).

pub mod commands;
pub mod error;
pub mod scenario;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::CheckOptions;
use error::CliError;
use scenario::VariantSpec;

pub const THREADS_ENV: &str = "BONNETLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bonnetlab", version, about = "Construct and verify Bonnet hypersurface pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build M and M′ from a scenario; write component CSVs and a manifest.
    Construct {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        variant: Option<VariantSpec>,
        /// Tolerance for the pair verification recorded in the manifest.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the residual report of a scenario or a construct manifest.
    Check {
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Judge residuals on interior nodes only.
        #[arg(long)]
        interior_only: bool,
        #[arg(long, value_enum)]
        variant: Option<VariantSpec>,
        /// Also write the report to `<out>/check.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the least-squares solver configured in the scenario's `solve` section.
    Solve {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Render heatmaps and a text summary from a `check` output.
    Report {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Cap the global worker pool from `BONNETLAB_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Threads(raw.clone()))?;
    // Fails only if the pool already exists, which is harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Run one command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Construct { scenario, out, variant, tol } => commands::construct(&scenario, &out, variant, tol),
        Command::Check { input, tol, interior_only, variant, out } => {
            let opts = CheckOptions { tol, interior_only, variant };
            commands::check(&input, &opts, out.as_deref()).map(|(outcome, json)| {
                // A closed pipe (`bonnetlab check … | head`) is not an error.
                let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), json.as_bytes());
                outcome
            })
        }
        Command::Solve { scenario, out, tol } => commands::solve(&scenario, &out, tol),
        Command::Report { input, out } => commands::report(&input, &out),
    });
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("{}", e.to_json());
            2
        }
    }
}
