// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// Appended to the recombination summary so a generator knows what to do
/// with the two approaches it is shown.
pub const HYBRID_INSTRUCTION: &str = "Study approach A and approach B above, keep the strongest \
ideas from each, and write a single new solution that merges them into one hybrid method.";

/// A past score and what produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreNote {
    #[serde(with = "crate::ext_real")]
    pub score: f64,
    pub summary: String,
}

/// Context handed to a generator along with the parent candidate.
///
/// Field order is fixed by the struct declaration, so the JSON produced by
/// [`AdviceBundle::canonical_json`] does not depend on how the bundle was
/// built or in which order keys arrived when it was parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdviceBundle {
    pub task_description: String,
    #[serde(default)]
    pub research_ideas: Vec<String>,
    #[serde(default)]
    pub recombination_summary: Option<String>,
    #[serde(default)]
    pub score_history: Vec<ScoreNote>,
}

impl AdviceBundle {
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("advice bundle serializes")
    }

    pub fn with_history(mut self, history: Vec<ScoreNote>) -> Self {
        self.score_history = history;
        self
    }
}

/// Assemble generation context for a task.
///
/// Ideas are kept verbatim and in the order given. When two parent
/// summaries are supplied the bundle carries both, labelled A and B,
/// followed by [`HYBRID_INSTRUCTION`].
pub fn build_advice(
    task_description: &str,
    ideas: &[String],
    recombination: Option<(&str, &str)>,
) -> AdviceBundle {
    let recombination_summary = recombination
        .map(|(a, b)| format!("Approach A:\n{a}\n\nApproach B:\n{b}\n\n{HYBRID_INSTRUCTION}"));
    AdviceBundle {
        task_description: task_description.to_string(),
        research_ideas: ideas.to_vec(),
        recombination_summary,
        score_history: Vec::new(),
    }
}
