// SPDX-License-Identifier: Apache-2.0

//! Score-driven tree search with rank-normalized PUCT selection.

mod export;
mod run;
mod tree;

use thiserror::Error;

use crate::sandbox::SandboxError;

pub use export::{
    breakthroughs_csv, ExportNode, TreeExport, BREAKTHROUGH_HEADER, TREE_SCHEMA_VERSION,
};
pub use run::{run_search, run_search_with, SearchOptions, DEFAULT_C_PUCT, GENERATION_RETRIES};
pub use tree::{init_tree, BreakthroughPoint, NodeId, RankTable, SearchNode, SearchTree};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("exploration constant must be positive and finite, got {0}")]
    InvalidCPuct(f64),
    #[error("budget must be at least 1")]
    InvalidBudget,
    #[error("no node with id {0}")]
    UnknownParent(NodeId),
    #[error("inconsistent tree: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Sandbox(#[from] SandboxError),
}
