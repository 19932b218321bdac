// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::mutation::Candidate;
use crate::sandbox::ExecutionRecord;

use super::SearchError;

/// Node ids are creation indices, so the root is always 0.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchNode {
    pub id: NodeId,
    pub parent_id: Option<NodeId>,
    pub candidate: Candidate,
    #[serde(with = "crate::ext_real")]
    pub task_score: f64,
    pub visit_count: u64,
    pub creation_index: usize,
    pub depth: usize,
    pub eval_record: ExecutionRecord,
}

/// Search tree with incrementally maintained visit counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTree {
    nodes: Vec<SearchNode>,
    c_puct: f64,
    rng_seed: u64,
    n_total: u64,
}

/// Ascending ranks (1-based) and rank scores, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub ranks: Vec<usize>,
    pub rank_scores: Vec<f64>,
}

/// Scores as ranked: NaN counts as a failed evaluation.
fn rank_key(score: f64) -> f64 {
    if score.is_nan() {
        f64::NEG_INFINITY
    } else {
        score
    }
}

pub fn init_tree(
    root: Candidate,
    root_record: ExecutionRecord,
    c_puct: f64,
    seed: u64,
) -> Result<SearchTree, SearchError> {
    if !(c_puct > 0.0 && c_puct.is_finite()) {
        return Err(SearchError::InvalidCPuct(c_puct));
    }
    let node = SearchNode {
        id: 0,
        parent_id: None,
        candidate: root,
        task_score: root_record.score,
        visit_count: 1,
        creation_index: 0,
        depth: 0,
        eval_record: root_record,
    };
    Ok(SearchTree {
        nodes: vec![node],
        c_puct,
        rng_seed: seed,
        n_total: 1,
    })
}

impl SearchTree {
    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&SearchNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root_id(&self) -> NodeId {
        0
    }

    pub fn c_puct(&self) -> f64 {
        self.c_puct
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    /// Ids from the root down to `id`, inclusive.
    pub fn lineage(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = Vec::new();
        let mut cur = Some(id);
        while let Some(u) = cur {
            path.push(u);
            cur = self.nodes[u].parent_id;
        }
        path.reverse();
        path
    }

    /// Insert a child and back-propagate one visit to every ancestor.
    pub fn expand(
        &mut self,
        parent_id: NodeId,
        child: Candidate,
        record: ExecutionRecord,
    ) -> Result<NodeId, SearchError> {
        let parent = self
            .nodes
            .get(parent_id)
            .ok_or(SearchError::UnknownParent(parent_id))?;
        let id = self.nodes.len();
        let depth = parent.depth + 1;
        self.nodes.push(SearchNode {
            id,
            parent_id: Some(parent_id),
            candidate: child,
            task_score: record.score,
            visit_count: 1,
            creation_index: id,
            depth,
            eval_record: record,
        });
        let mut cur = Some(parent_id);
        while let Some(u) = cur {
            self.nodes[u].visit_count += 1;
            cur = self.nodes[u].parent_id;
        }
        self.n_total += depth as u64 + 1;
        Ok(id)
    }

    pub fn compute_rank_scores(&self) -> RankTable {
        let n = self.nodes.len();
        let mut order: Vec<NodeId> = (0..n).collect();
        // stable sort keeps creation order among equal scores
        order.sort_by(|&a, &b| {
            rank_key(self.nodes[a].task_score)
                .partial_cmp(&rank_key(self.nodes[b].task_score))
                .unwrap_or(Ordering::Equal)
        });
        let mut ranks = vec![0; n];
        let mut rank_scores = vec![1.0; n];
        for (pos, &u) in order.iter().enumerate() {
            ranks[u] = pos + 1;
            if n > 1 {
                rank_scores[u] = pos as f64 / (n - 1) as f64;
            }
        }
        RankTable { ranks, rank_scores }
    }

    /// PUCT value of every node under `ranks`.
    pub fn puct_scores(&self, ranks: &RankTable) -> Vec<f64> {
        let prior = 1.0 / self.nodes.len() as f64;
        let sqrt_total = (self.n_total as f64).sqrt();
        self.nodes
            .iter()
            .map(|u| {
                ranks.rank_scores[u.id]
                    + self.c_puct * prior * sqrt_total / (1.0 + u.visit_count as f64)
            })
            .collect()
    }

    /// Node with the highest PUCT value; the earliest created wins ties.
    pub fn select_node(&self, ranks: &RankTable) -> NodeId {
        first_argmax(&self.puct_scores(ranks))
    }

    /// Node with the highest task score; the earliest created wins ties.
    pub fn best_solution(&self) -> NodeId {
        let scores: Vec<f64> = self.nodes.iter().map(|u| rank_key(u.task_score)).collect();
        first_argmax(&scores)
    }

    pub fn breakthrough_series(&self) -> Vec<BreakthroughPoint> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut best = f64::NEG_INFINITY;
        for (i, u) in self.nodes.iter().enumerate() {
            let s = rank_key(u.task_score);
            let is_breakthrough = i == 0 || s > best;
            if i == 0 || s > best {
                best = s;
            }
            out.push(BreakthroughPoint {
                node_count: i + 1,
                max_score: best,
                is_breakthrough,
            });
        }
        out
    }

    /// Check every structural invariant from scratch, for trees loaded from disk.
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::Corrupt(msg));
        if self.nodes.is_empty() {
            return bad("tree has no nodes".into());
        }
        if !(self.c_puct > 0.0 && self.c_puct.is_finite()) {
            return Err(SearchError::InvalidCPuct(self.c_puct));
        }
        let mut expected_visits = vec![1u64; self.nodes.len()];
        for (i, u) in self.nodes.iter().enumerate() {
            if u.id != i || u.creation_index != i {
                return bad(format!(
                    "node at position {i} has id {} and creation index {}",
                    u.id, u.creation_index
                ));
            }
            match (i, u.parent_id) {
                (0, None) => {
                    if u.depth != 0 {
                        return bad("root depth is not 0".into());
                    }
                }
                (0, Some(_)) => return bad("root has a parent".into()),
                (_, None) => return bad(format!("node {i} has no parent")),
                (_, Some(p)) if p >= i => {
                    return bad(format!("node {i} has parent {p} created after it"))
                }
                (_, Some(p)) => {
                    if u.depth != self.nodes[p].depth + 1 {
                        return bad(format!(
                            "node {i} has depth {} under a parent at depth {}",
                            u.depth, self.nodes[p].depth
                        ));
                    }
                }
            }
        }
        // parents precede children, so one reverse sweep accumulates subtree sizes
        for i in (1..self.nodes.len()).rev() {
            let p = self.nodes[i].parent_id.expect("checked above");
            expected_visits[p] += expected_visits[i];
        }
        for (u, want) in self.nodes.iter().zip(&expected_visits) {
            if u.visit_count != *want {
                return bad(format!(
                    "node {} has visit count {} but {} descendants",
                    u.id,
                    u.visit_count,
                    want - 1
                ));
            }
        }
        let total: u64 = expected_visits.iter().sum();
        if total != self.n_total {
            return bad(format!(
                "stored visit total {} differs from recomputed {total}",
                self.n_total
            ));
        }
        Ok(())
    }
}

fn first_argmax(values: &[f64]) -> NodeId {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakthroughPoint {
    pub node_count: usize,
    #[serde(with = "crate::ext_real")]
    pub max_score: f64,
    pub is_breakthrough: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sandbox::ExecStatus;

    fn cand(i: usize) -> Candidate {
        Candidate::program(format!("#{i}")).unwrap()
    }

    fn rec(score: f64) -> ExecutionRecord {
        if score.is_finite() {
            ExecutionRecord::ok(score)
        } else {
            ExecutionRecord::failed(ExecStatus::Crashed, "")
        }
    }

    /// Root plus children of the root, one per extra score.
    fn flat(scores: &[f64], c: f64) -> SearchTree {
        let mut t = init_tree(cand(0), rec(scores[0]), c, 0).unwrap();
        for (i, s) in scores.iter().enumerate().skip(1) {
            t.expand(0, cand(i), rec(*s)).unwrap();
        }
        t
    }

    #[test]
    fn fresh_tree() {
        let t = init_tree(cand(0), rec(0.5), 1.0, 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.nodes()[0].visit_count, 1);
        assert_eq!(t.n_total(), 1);
        assert_eq!(t.compute_rank_scores().rank_scores, vec![1.0]);
        assert_eq!(t.select_node(&t.compute_rank_scores()), 0);
        assert_eq!(t.best_solution(), 0);
        assert!(init_tree(cand(0), rec(0.5), 0.0, 3).is_err());
        assert!(init_tree(cand(0), rec(0.5), f64::NAN, 3).is_err());
    }

    #[test]
    fn expanding_the_root() {
        let mut t = init_tree(cand(0), rec(0.0), 1.0, 0).unwrap();
        let c = t.expand(0, cand(1), rec(1.0)).unwrap();
        assert_eq!(
            (
                t.nodes()[0].visit_count,
                t.nodes()[c].visit_count,
                t.n_total()
            ),
            (2, 1, 3)
        );
        assert!(matches!(
            t.expand(9, cand(2), rec(0.0)),
            Err(SearchError::UnknownParent(9))
        ));
        t.validate().unwrap();
    }

    #[test]
    fn chain_backprop() {
        let mut t = init_tree(cand(0), rec(0.0), 1.0, 0).unwrap();
        for i in 1..6 {
            t.expand(i - 1, cand(i), rec(0.0)).unwrap();
        }
        let visits: Vec<u64> = t.nodes().iter().map(|u| u.visit_count).collect();
        assert_eq!(visits, vec![6, 5, 4, 3, 2, 1]);
        assert_eq!(t.n_total(), 21);
        assert_eq!(t.nodes()[5].depth, 5);
        assert_eq!(t.lineage(5), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn rank_scores_spread_evenly() {
        let t = flat(&[-1.0, 0.0, 2.0], 1.0);
        assert_eq!(t.compute_rank_scores().rank_scores, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn equal_scores_rank_by_creation() {
        let t = flat(&[3.0; 4], 1.0);
        let r = t.compute_rank_scores();
        assert_eq!(r.ranks, vec![1, 2, 3, 4]);
        assert_eq!(r.rank_scores, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
    }

    #[test]
    fn failed_nodes_rank_lowest() {
        let t = flat(&[0.0, f64::NEG_INFINITY, -5.0, f64::NAN], 1.0);
        assert_eq!(t.compute_rank_scores().ranks, vec![4, 1, 3, 2]);
    }

    #[test]
    fn two_node_puct() {
        let t = flat(&[0.0, 1.0], 1.0);
        let p = t.puct_scores(&t.compute_rank_scores());
        assert!((p[0] - 0.5 * 3f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((p[1] - (1.0 + 0.5 * 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((p[0] - 0.288_675_134_594_812_9).abs() < 1e-12);
        assert!((p[1] - 1.433_012_701_892_219_3).abs() < 1e-12);
        assert_eq!(t.select_node(&t.compute_rank_scores()), 1);
    }

    #[test]
    fn tiny_c_exploits() {
        let t = flat(&[0.3, 0.9, 0.1, 0.5], 1e-9);
        assert_eq!(t.select_node(&t.compute_rank_scores()), 1);
    }

    #[test]
    fn best_solution_prefers_earliest_tie() {
        let t = flat(&[0.1, 0.9, 0.9], 1.0);
        assert_eq!(t.best_solution(), 1);
        let t = flat(&[f64::NEG_INFINITY, -1e300], 1.0);
        assert_eq!(t.best_solution(), 1);
    }

    #[test]
    fn breakthroughs() {
        let t = flat(&[1.0, 0.0, 2.0], 1.0);
        let s = t.breakthrough_series();
        let pairs: Vec<(usize, f64, bool)> = s
            .iter()
            .map(|p| (p.node_count, p.max_score, p.is_breakthrough))
            .collect();
        assert_eq!(pairs, vec![(1, 1.0, true), (2, 1.0, false), (3, 2.0, true)]);
        let flat_series = flat(&[0.4; 5], 1.0).breakthrough_series();
        assert_eq!(flat_series.len(), 5);
        assert_eq!(flat_series.iter().filter(|p| p.is_breakthrough).count(), 1);
    }

    #[test]
    fn validation_catches_tampering() {
        let mut t = flat(&[0.0, 1.0, 2.0], 1.0);
        t.validate().unwrap();
        t.nodes[0].visit_count = 7;
        assert!(t.validate().is_err());
        let mut t = flat(&[0.0, 1.0], 1.0);
        t.n_total += 1;
        assert!(t.validate().is_err());
    }

    #[test]
    fn state_round_trips_through_json() {
        let t = flat(&[0.0, f64::NEG_INFINITY, 2.5], 1.5);
        let text = serde_json::to_string(&t).unwrap();
        let back: SearchTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back.nodes()[1].task_score, f64::NEG_INFINITY);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
