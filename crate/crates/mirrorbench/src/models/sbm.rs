//! Plain (non-degree-corrected) stochastic block model: communities from
//! greedy modularity, observed block-to-block edge counts, Erdos-Renyi
//! wiring inside each block and random bipartite wiring across blocks.

use super::community::detect_communities;
use super::{seeded_rng, ModelError, RngSeed};
use crate::graph::Graph;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    /// Block index per node of the fitted graph.
    pub assignment: Vec<usize>,
    pub block_sizes: Vec<usize>,
    /// Symmetric matrix of observed edge counts between (and within) blocks.
    pub block_edge_counts: Vec<Vec<usize>>,
}

impl SbmParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let b = self.block_sizes.len();
        let err = |msg: String| Err(ModelError::InvalidParams(msg));
        if self.block_edge_counts.len() != b
            || self.block_edge_counts.iter().any(|row| row.len() != b)
        {
            return err(format!("sbm: block matrix must be {b}x{b}"));
        }
        if self.assignment.len() != self.block_sizes.iter().sum::<usize>() {
            return err("sbm: block sizes must sum to the node count".into());
        }
        if self.assignment.iter().any(|&a| a >= b) {
            return err("sbm: assignment references an unknown block".into());
        }
        for r in 0..b {
            for s in r..b {
                if self.block_edge_counts[r][s] != self.block_edge_counts[s][r] {
                    return err("sbm: block matrix must be symmetric".into());
                }
            }
            let max_internal = self.block_sizes[r] * self.block_sizes[r].saturating_sub(1) / 2;
            if self.block_edge_counts[r][r] > max_internal {
                return err(format!(
                    "sbm: block {r} has {} internal edges, max {max_internal}",
                    self.block_edge_counts[r][r]
                ));
            }
        }
        Ok(())
    }
}

pub fn fit_sbm(g: &Graph) -> Result<SbmParams, ModelError> {
    if g.edge_count() == 0 {
        return Err(ModelError::DegenerateInput(
            "sbm fit needs at least one edge".into(),
        ));
    }
    let assignment = detect_communities(g);
    let blocks = assignment.iter().copied().max().map_or(0, |b| b + 1);
    let mut block_sizes = vec![0usize; blocks];
    for &b in &assignment {
        block_sizes[b] += 1;
    }
    let mut block_edge_counts = vec![vec![0usize; blocks]; blocks];
    for (u, v) in g.edges() {
        let (r, s) = (assignment[u], assignment[v]);
        block_edge_counts[r][s] += 1;
        if r != s {
            block_edge_counts[s][r] += 1;
        }
    }
    Ok(SbmParams {
        assignment,
        block_sizes,
        block_edge_counts,
    })
}

/// Nodes are laid out block by block; block r occupies a contiguous id
/// range. Within-block pairs connect with m_rr / (n_r choose 2), cross-block
/// pairs with m_rs / (n_r * n_s), both clamped to [0, 1].
pub fn generate_sbm(params: &SbmParams, seed: RngSeed) -> Graph {
    let blocks = params.block_sizes.len();
    let mut offsets = vec![0usize; blocks + 1];
    for r in 0..blocks {
        offsets[r + 1] = offsets[r] + params.block_sizes[r];
    }
    let n = offsets[blocks];
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    for r in 0..blocks {
        let nr = params.block_sizes[r];
        if nr >= 2 {
            let pairs = (nr * (nr - 1) / 2) as f64;
            let p = (params.block_edge_counts[r][r] as f64 / pairs).clamp(0.0, 1.0);
            if p > 0.0 {
                for u in offsets[r]..offsets[r + 1] {
                    for v in u + 1..offsets[r + 1] {
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
            }
        }
        for s in r + 1..blocks {
            let ns = params.block_sizes[s];
            if nr == 0 || ns == 0 {
                continue;
            }
            let p = (params.block_edge_counts[r][s] as f64 / (nr * ns) as f64).clamp(0.0, 1.0);
            if p > 0.0 {
                for u in offsets[r]..offsets[r + 1] {
                    for v in offsets[s]..offsets[s + 1] {
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
            }
        }
    }
    Graph::from_pairs(n, edges)
}
