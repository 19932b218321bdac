// SPDX-License-Identifier: Apache-2.0

//! Euler series acceleration by repeated averaging of adjacent partial sums.
//!
//! Level 0 of the table holds the partial sums `S_0..S_n`; level `m + 1`
//! averages neighbours of level `m`. The entries of interest are the final
//! (most recent) entry of every level, `D_m = S^(m)_{n-m}`, which is a
//! binomially weighted mean of the last `m + 1` partial sums. The estimate is
//! the `D_m` whose change from `D_{m-1}` is smallest, and that change is
//! reported as the stability of the estimate.

/// Accelerated limit of a series together with how settled it is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerEstimate {
    pub estimate: f64,
    /// `|D_m - D_{m-1}|` at the selected level; zero when the table is flat.
    pub stability: f64,
    /// Averaging depth `m` that produced the estimate.
    pub depth: usize,
}

/// Accelerate the series whose terms are `terms`.
///
/// Panics when fewer than two terms are supplied.
pub fn euler_accelerate(terms: &[f64]) -> EulerEstimate {
    assert!(
        terms.len() >= 2,
        "Euler acceleration needs at least two terms"
    );

    let mut level: Vec<f64> = terms
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect();

    let mut previous = *level.last().expect("non-empty");
    let mut best = EulerEstimate {
        estimate: previous,
        stability: f64::INFINITY,
        depth: 0,
    };
    let mut depth = 0;
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = 0.5 * (level[i] + level[i + 1]);
        }
        level.pop();
        depth += 1;
        let current = *level.last().expect("non-empty");
        let change = (current - previous).abs();
        if change < best.stability {
            best = EulerEstimate {
                estimate: current,
                stability: change,
                depth,
            };
        }
        previous = current;
    }
    best
}
