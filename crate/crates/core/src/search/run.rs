// SPDX-License-Identifier: Apache-2.0

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mutation::{build_advice, AdviceBundle, Candidate, GeneratorHandle, ScoreNote};
use crate::sandbox::{ExecStatus, ExecutionRecord, Sandbox};
use crate::tasks::ScorableTask;

use super::{init_tree, NodeId, SearchError, SearchTree};

pub const DEFAULT_C_PUCT: f64 = 1.0;
/// Extra generation attempts after the first one fails.
pub const GENERATION_RETRIES: usize = 3;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub budget: usize,
    pub c_puct: f64,
    pub seed: u64,
    pub ideas: Vec<String>,
    /// Replaces the task's own starter candidate.
    pub root: Option<Candidate>,
}

impl SearchOptions {
    pub fn new(budget: usize, c_puct: f64, seed: u64) -> Self {
        Self {
            budget,
            c_puct,
            seed,
            ideas: Vec::new(),
            root: None,
        }
    }
}

fn advice_for(tree: &SearchTree, parent: NodeId, base: &AdviceBundle) -> AdviceBundle {
    let history = tree
        .lineage(parent)
        .into_iter()
        .map(|u| {
            let node = &tree.nodes()[u];
            ScoreNote {
                score: node.task_score,
                summary: node.candidate.summary(),
            }
        })
        .collect();
    base.clone().with_history(history)
}

pub fn run_search(
    task: &dyn ScorableTask,
    generator: &GeneratorHandle,
    sandbox: &Sandbox,
    opts: &SearchOptions,
) -> Result<SearchTree, SearchError> {
    run_search_with(task, generator, sandbox, opts, &mut |_, _| {})
}

/// Like [`run_search`], calling `on_node` after every insertion (the root included).
pub fn run_search_with(
    task: &dyn ScorableTask,
    generator: &GeneratorHandle,
    sandbox: &Sandbox,
    opts: &SearchOptions,
    on_node: &mut dyn FnMut(&SearchTree, NodeId),
) -> Result<SearchTree, SearchError> {
    if opts.budget == 0 {
        return Err(SearchError::InvalidBudget);
    }
    if !(opts.c_puct > 0.0 && opts.c_puct.is_finite()) {
        return Err(SearchError::InvalidCPuct(opts.c_puct));
    }
    let root = opts.root.clone().unwrap_or_else(|| task.root_candidate());
    let root_record = sandbox.execute(0, &root, task)?;
    let mut tree = init_tree(root, root_record, opts.c_puct, opts.seed)?;
    on_node(&tree, 0);

    let base_advice = build_advice(task.description(), &opts.ideas, None);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.budget {
        let ranks = tree.compute_rank_scores();
        let parent_id = tree.select_node(&ranks);
        let parent = tree.nodes()[parent_id].candidate.clone();
        let advice = advice_for(&tree, parent_id, &base_advice);
        let node_id = tree.len();

        let mut last_err = None;
        let mut generated = None;
        for _ in 0..=GENERATION_RETRIES {
            match generator.generate(&parent, &advice, rng.next_u64()) {
                Ok(g) => {
                    generated = Some(g.candidate);
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let (child, record) = match generated {
            Some(child) => {
                let record = sandbox.execute(node_id, &child, task)?;
                (child, record)
            }
            None => {
                let why = last_err.map(|e| e.to_string()).unwrap_or_default();
                // the failed node keeps its parent's payload so it still has a digest
                let placeholder = Candidate {
                    payload: parent.payload.clone(),
                    advice_context: None,
                    parent_digest: Some(parent.digest()),
                };
                (
                    placeholder,
                    ExecutionRecord::failed(ExecStatus::GenerationFailed, why),
                )
            }
        };
        let id = tree.expand(parent_id, child, record)?;
        on_node(&tree, id);
    }
    Ok(tree)
}
