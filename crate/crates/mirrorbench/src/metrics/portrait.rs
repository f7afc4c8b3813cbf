//! Network portraits and the portrait divergence.
//!
//! The portrait of a graph is the matrix `B` with `B[l][k]` = number of
//! nodes that have exactly `k` nodes at shortest-path distance `l`. Only
//! reachable distances are recorded, so row `l` sums to the number of nodes
//! with eccentricity >= `l`.

use crate::graph::{Graph, UNREACHABLE};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    /// rows[l] maps k -> number of nodes with exactly k nodes at distance l
    rows: Vec<BTreeMap<usize, usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PortraitError {
    #[error("portrait divergence undefined: graph has no reachable pairs (n <= 1 or m = 0)")]
    UndefinedPortrait,
}

impl Portrait {
    pub fn rows(&self) -> &[BTreeMap<usize, usize>] {
        &self.rows
    }

    /// Joint distribution P(l, k) proportional to k * B[l][k], normalized
    /// over all (l, k) cells.
    pub fn joint(&self) -> BTreeMap<(usize, usize), f64> {
        let mut mass: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut total = 0.0;
        for (l, row) in self.rows.iter().enumerate() {
            for (&k, &count) in row {
                let w = (k as f64) * (count as f64);
                if w > 0.0 {
                    mass.insert((l, k), w);
                    total += w;
                }
            }
        }
        for v in mass.values_mut() {
            *v /= total;
        }
        mass
    }
}

/// Exact portrait via BFS from every node.
pub fn portrait(g: &Graph) -> Portrait {
    let n = g.node_count();
    let mut rows: Vec<BTreeMap<usize, usize>> = Vec::new();
    let mut shell_counts: Vec<usize> = Vec::new();
    for s in 0..n {
        shell_counts.clear();
        for &d in &g.bfs_distances(s) {
            if d == UNREACHABLE {
                continue;
            }
            if d >= shell_counts.len() {
                shell_counts.resize(d + 1, 0);
            }
            shell_counts[d] += 1;
        }
        if shell_counts.len() > rows.len() {
            rows.resize_with(shell_counts.len(), BTreeMap::new);
        }
        for (l, &k) in shell_counts.iter().enumerate() {
            if k > 0 {
                *rows[l].entry(k).or_insert(0) += 1;
            }
        }
    }
    Portrait { rows }
}

/// Base-2 JS divergence of the two portrait joints, padded to a common
/// (l, k) support. Errors when either graph has no reachable pairs.
pub fn portrait_divergence(g1: &Graph, g2: &Graph) -> Result<f64, PortraitError> {
    if g1.node_count() <= 1 || g1.edge_count() == 0 || g2.node_count() <= 1 || g2.edge_count() == 0
    {
        return Err(PortraitError::UndefinedPortrait);
    }
    Ok(portrait_divergence_from(&portrait(g1), &portrait(g2)))
}

/// Divergence of two precomputed portraits.
pub fn portrait_divergence_from(p1: &Portrait, p2: &Portrait) -> f64 {
    let a = p1.joint();
    let b = p2.joint();
    let mut keys: Vec<(usize, usize)> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut acc = 0.0;
    for key in keys {
        let pa = a.get(&key).copied().unwrap_or(0.0);
        let pb = b.get(&key).copied().unwrap_or(0.0);
        let m = 0.5 * (pa + pb);
        if pa > 0.0 {
            acc += 0.5 * pa * (pa / m).log2();
        }
        if pb > 0.0 {
            acc += 0.5 * pb * (pb / m).log2();
        }
    }
    acc.clamp(0.0, 1.0)
}
