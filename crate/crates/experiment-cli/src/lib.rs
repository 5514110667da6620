//! Reproduction harness: JSON experiment specs, parameter sweeps over a
//! noise grid, low-order polynomial fits and CSV/text reports.

pub mod fit;
pub mod report;
pub mod spec;
pub mod sweep;

pub use fit::{fit_polynomial, FitResult};
pub use report::{
    audit_bounds, crossover, emit_report, fit_table, normalized_fidelity, read_csv, summary_text, write_csv, Column,
    CsvRow, MethodFit, ReportFiles,
};
pub use spec::{BoundKind, CodeInstance, CodeSpec, EnsembleSpec, ExperimentSpec, FitSpec, GridSpec, Method, ResidualSpec, Spacing};
pub use sweep::{run_sweep, SweepRow, SweepTable, BASELINE};

use qer_channels::ChannelError;
use qer_dual::DualError;
use qer_ops::OpsError;
use qer_optimal::OptimalError;
use qer_stabilizer::StabilizerError;
use qer_structured::StructuredError;

/// Environment variable holding the worker count for sweeps.
pub const WORKERS_ENV: &str = "QER_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Optimal(#[from] OptimalError),
    #[error(transparent)]
    Structured(#[from] StructuredError),
    #[error(transparent)]
    Dual(#[from] DualError),
}

/// Sets the global rayon pool size from [`WORKERS_ENV`] when it is set.
pub fn configure_workers() -> Result<(), ExperimentError> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| ExperimentError::Spec(format!("{WORKERS_ENV}={v} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ExperimentError::Spec(e.to_string()))?;
    }
    Ok(())
}
