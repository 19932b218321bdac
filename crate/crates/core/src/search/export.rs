// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::sandbox::ExecStatus;

use super::{BreakthroughPoint, NodeId, SearchTree};

pub const TREE_SCHEMA_VERSION: u32 = 1;
pub const BREAKTHROUGH_HEADER: &str = "node_count,max_score,is_breakthrough";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportNode {
    pub id: NodeId,
    pub parent_id: Option<NodeId>,
    pub creation_index: usize,
    pub depth: usize,
    #[serde(with = "crate::ext_real")]
    pub task_score: f64,
    pub visit_count: u64,
    pub candidate_digest: String,
    pub status: ExecStatus,
    /// Null unless timings were asked for, which keeps exports reproducible.
    pub wall_time_ms: Option<u64>,
}

/// One document per run describing every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeExport {
    pub schema_version: u32,
    pub run_id: String,
    pub task_id: String,
    pub c_puct: f64,
    pub seed: u64,
    pub nodes: Vec<ExportNode>,
}

impl TreeExport {
    /// Build the export; `timings` holds per-node wall times when they should be embedded.
    pub fn new(tree: &SearchTree, run_id: &str, task_id: &str, timings: Option<&[u64]>) -> Self {
        let nodes = tree
            .nodes()
            .iter()
            .map(|u| ExportNode {
                id: u.id,
                parent_id: u.parent_id,
                creation_index: u.creation_index,
                depth: u.depth,
                task_score: u.task_score,
                visit_count: u.visit_count,
                candidate_digest: u.candidate.digest(),
                status: u.eval_record.status,
                wall_time_ms: timings.and_then(|t| t.get(u.id).copied()),
            })
            .collect();
        Self {
            schema_version: TREE_SCHEMA_VERSION,
            run_id: run_id.to_string(),
            task_id: task_id.to_string(),
            c_puct: tree.c_puct(),
            seed: tree.rng_seed(),
            nodes,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("tree export serializes");
        text.push('\n');
        text
    }
}

fn format_score(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        x.to_string()
    }
}

/// Running-maximum series as delimited text with a header row.
pub fn breakthroughs_csv(series: &[BreakthroughPoint]) -> String {
    let mut out = String::from(BREAKTHROUGH_HEADER);
    out.push('\n');
    for p in series {
        out.push_str(&format!(
            "{},{},{}\n",
            p.node_count,
            format_score(p.max_score),
            p.is_breakthrough
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::Candidate;
    use crate::sandbox::ExecutionRecord;
    use crate::search::init_tree;

    fn tree() -> SearchTree {
        let mut t = init_tree(
            Candidate::program("a").unwrap(),
            ExecutionRecord::ok(1.0),
            1.0,
            5,
        )
        .unwrap();
        t.expand(
            0,
            Candidate::program("b").unwrap(),
            ExecutionRecord::failed(ExecStatus::Timeout, ""),
        )
        .unwrap();
        t.expand(
            1,
            Candidate::program("c").unwrap(),
            ExecutionRecord::ok(2.5),
        )
        .unwrap();
        t
    }

    #[test]
    fn csv_rows() {
        let text = breakthroughs_csv(&tree().breakthrough_series());
        assert_eq!(
            text,
            "node_count,max_score,is_breakthrough\n1,1,true\n2,1,false\n3,2.5,true\n"
        );
    }

    #[test]
    fn export_fields() {
        let e = TreeExport::new(&tree(), "r", "t", None);
        assert_eq!(e.nodes.len(), 3);
        assert_eq!(e.nodes[1].status, ExecStatus::Timeout);
        assert_eq!(e.nodes[1].task_score, f64::NEG_INFINITY);
        assert_eq!(e.nodes[2].parent_id, Some(1));
        let json: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(json["nodes"][1]["task_score"], "-inf");
        assert!(json["nodes"][0]["wall_time_ms"].is_null());
        let timed = TreeExport::new(&tree(), "r", "t", Some(&[4, 5, 6]));
        assert_eq!(timed.nodes[2].wall_time_ms, Some(6));
    }
}
