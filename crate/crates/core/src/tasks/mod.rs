// SPDX-License-Identifier: Apache-2.0

//! Scorable tasks: the contract the search optimises against, plus the
//! built-in synthetic, integral and forecasting tasks.

mod forecast_task;
mod integral_task;
pub mod integrals;
mod synthetic;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::mutation::{Candidate, MutationSchedule, ParamConfig};

pub use forecast_task::{forecast_task_score, ForecastTask};
pub use integral_task::{evaluate_integral, IntegralOutcome, IntegralsTask, TASK_TOLERANCE};
pub use synthetic::{synthetic_task, SyntheticTask, SYNTHETIC_TARGET};

#[derive(Debug, Error, PartialEq)]
pub enum TaskError {
    #[error("{0}")]
    Invalid(String),
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("config is missing key `{0}`")]
    MissingKey(String),
    #[error("config key `{0}` has the wrong type")]
    WrongType(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitPolicy {
    TrainOnly,
    TrainHoldout,
}

/// A data file handed to program candidates, read-only.
#[derive(Debug, Clone, PartialEq)]
pub struct InputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDescriptor {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

impl InputFile {
    pub fn describe(&self) -> InputDescriptor {
        InputDescriptor {
            name: self.name.clone(),
            sha256: hex::encode(Sha256::digest(&self.bytes)),
            bytes: self.bytes.len(),
        }
    }
}

/// Something the search can optimise. Higher scores are better.
///
/// Only data used for hill climbing may reach [`ScorableTask::score_config`]
/// or [`ScorableTask::inputs`]; held-out data stays outside the task.
pub trait ScorableTask: Send + Sync {
    fn task_id(&self) -> &str;
    fn description(&self) -> &str;
    fn split_policy(&self) -> SplitPolicy;
    /// Files copied read-only into each program candidate's scratch directory.
    fn inputs(&self) -> Vec<InputFile>;
    fn root_candidate(&self) -> Candidate;
    /// Step laws for the deterministic mutator over this task's config space.
    fn mutation_schedule(&self) -> MutationSchedule;
    fn score_config(&self, config: &ParamConfig) -> Result<f64, TaskError>;

    /// Command prefix for program candidates; the payload file path is appended.
    fn program_launcher(&self) -> Vec<String> {
        vec!["sh".to_string()]
    }

    fn input_manifest(&self) -> Vec<InputDescriptor> {
        self.inputs().iter().map(InputFile::describe).collect()
    }
}

/// Knobs for building the built-in tasks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskOptions {
    /// Dimension of the synthetic task.
    pub dimension: usize,
}

impl Default for TaskOptions {
    fn default() -> Self {
        Self { dimension: 4 }
    }
}

/// `(task_id, description)` for every built-in task.
pub fn builtin_tasks() -> Vec<(&'static str, &'static str)> {
    vec![
        ("synthetic", synthetic::DESCRIPTION),
        ("integrals", integral_task::DESCRIPTION),
        ("forecast", forecast_task::DESCRIPTION),
    ]
}

pub fn builtin_task(task_id: &str, opts: TaskOptions) -> Result<Box<dyn ScorableTask>, TaskError> {
    match task_id {
        "synthetic" => Ok(Box::new(synthetic_task(opts.dimension)?)),
        "integrals" => Ok(Box::new(IntegralsTask::builtin())),
        "forecast" => Ok(Box::new(ForecastTask::builtin())),
        other => Err(TaskError::UnknownTask(other.to_string())),
    }
}

pub(crate) fn number(config: &ParamConfig, key: &str) -> Result<f64, TaskError> {
    config
        .get(key)
        .ok_or_else(|| TaskError::MissingKey(key.to_string()))?
        .as_f64()
        .ok_or_else(|| TaskError::WrongType(key.to_string()))
}

pub(crate) fn choice<'a>(config: &'a ParamConfig, key: &str) -> Result<&'a str, TaskError> {
    config
        .get(key)
        .ok_or_else(|| TaskError::MissingKey(key.to_string()))?
        .as_str()
        .ok_or_else(|| TaskError::WrongType(key.to_string()))
}
