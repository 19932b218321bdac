// SPDX-License-Identifier: Apache-2.0

//! Run directories, exports and the tables printed by the command line.
//!
//! A run lives in `<output_root>/runs/<run_id>/`:
//!
//! - `manifest.json` written before the first iteration and finalized after the last
//! - `tree_state.json` full tree, enough to regenerate every export
//! - `tree.json`, `breakthroughs.csv` exports
//! - `timings.csv` per-node wall times, kept apart so the exports stay reproducible
//! - `nodes/<node_id>/` scratch directories of program candidates

mod benchmarks;
mod manifest;
mod run;

use std::path::PathBuf;

use thiserror::Error;

use crate::forecast::ForecastError;
use crate::mutation::GenerationError;
use crate::search::SearchError;
use crate::tasks::TaskError;

pub use benchmarks::{
    eval_integrals, forecast_report, integrals_table, tasks_table, ForecastReport, IntegralsReport,
};
pub use manifest::{
    ArtifactPaths, BestNode, LimitsRecord, RunManifest, RunStatus, MANIFEST_SCHEMA_VERSION,
};
pub use run::{
    cmd_export, cmd_run, default_run_id, run_dir, ExportKind, GeneratorSpec, RunArgs, RunState,
    RunSummary, BREAKTHROUGHS_FILE, MANIFEST_FILE, STATE_FILE, TIMINGS_FILE, TREE_FILE,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error("run directory {0} already exists; pick another run id or output root")]
    RunExists(PathBuf),
    #[error("no run at {0}")]
    MissingRun(PathBuf),
    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("generator check failed")]
    Generator(#[from] GenerationError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Forecast(#[from] ForecastError),
    #[error("{0}")]
    Invalid(String),
}

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}
