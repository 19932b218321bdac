// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::sandbox::Limits;
use crate::tasks::InputDescriptor;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Running,
    Completed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitsRecord {
    pub wall_time_s: f64,
    pub max_output_bytes: usize,
    pub memory_bytes: Option<u64>,
}

impl From<Limits> for LimitsRecord {
    fn from(l: Limits) -> Self {
        Self {
            wall_time_s: l.wall_time.as_secs_f64(),
            max_output_bytes: l.output_bytes,
            memory_bytes: l.memory_bytes,
        }
    }
}

/// File names relative to the run directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactPaths {
    pub state: String,
    pub tree: String,
    pub breakthroughs: String,
    pub timings: String,
    pub nodes_dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestNode {
    pub node_id: usize,
    #[serde(with = "crate::ext_real")]
    pub task_score: f64,
    pub candidate_digest: String,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub run_id: String,
    pub task_id: String,
    pub task_inputs: Vec<InputDescriptor>,
    pub generator: serde_json::Value,
    pub budget: usize,
    pub c_puct: f64,
    pub seed: u64,
    pub limits: LimitsRecord,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub status: RunStatus,
    pub error: Option<String>,
    pub node_count: Option<usize>,
    pub best: Option<BestNode>,
    pub artifacts: ArtifactPaths,
}
