//! Erdos-Renyi baseline: G(n, p) with p equal to the density of the fitted
//! graph.

use super::{seeded_rng, ModelError, RngSeed};
use crate::graph::Graph;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErParams {
    #[serde(rename = "n")]
    pub nodes: usize,
    #[serde(rename = "m")]
    pub edges: usize,
}

impl ErParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let max = self.nodes * self.nodes.saturating_sub(1) / 2;
        if self.edges > max {
            return Err(ModelError::InvalidParams(format!(
                "er: m={} exceeds n(n-1)/2={max}",
                self.edges
            )));
        }
        Ok(())
    }

    pub fn edge_probability(&self) -> f64 {
        if self.nodes < 2 {
            return 0.0;
        }
        2.0 * self.edges as f64 / (self.nodes as f64 * (self.nodes - 1) as f64)
    }
}

pub fn fit_er(g: &Graph) -> Result<ErParams, ModelError> {
    if g.node_count() < 2 {
        return Err(ModelError::DegenerateInput(format!(
            "er fit needs at least 2 nodes, got {}",
            g.node_count()
        )));
    }
    Ok(ErParams {
        nodes: g.node_count(),
        edges: g.edge_count(),
    })
}

/// Bernoulli draw per unordered pair with p = 2m / (n(n-1)).
pub fn generate_er(params: &ErParams, seed: RngSeed) -> Graph {
    let n = params.nodes;
    let p = params.edge_probability();
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    if p > 0.0 {
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_pairs(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_records_n_and_m() {
        let k4 = Graph::complete(4);
        assert_eq!(fit_er(&k4).unwrap(), ErParams { nodes: 4, edges: 6 });
        let empty_edges = Graph::empty(5);
        assert_eq!(
            fit_er(&empty_edges).unwrap(),
            ErParams { nodes: 5, edges: 0 }
        );
        assert!(fit_er(&Graph::empty(1)).is_err());
    }

    #[test]
    fn p_one_gives_complete_graph() {
        let params = ErParams { nodes: 4, edges: 6 };
        for seed in 0..10 {
            let g = generate_er(&params, seed);
            assert_eq!(g.edge_count(), 6);
        }
    }

    #[test]
    fn p_zero_gives_empty_graph() {
        let params = ErParams {
            nodes: 100,
            edges: 0,
        };
        let g = generate_er(&params, 1);
        assert_eq!(g.node_count(), 100);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn mean_edge_count_within_three_sigma() {
        // binomial oracle: mean m, per-sample sigma = sqrt(m(1-p))
        let params = ErParams {
            nodes: 200,
            edges: 400,
        };
        let p = params.edge_probability();
        let trials = 200;
        let total: u64 = (0..trials)
            .map(|s| generate_er(&params, s).edge_count() as u64)
            .sum();
        let mean = total as f64 / trials as f64;
        let sigma = (400.0 * (1.0 - p)).sqrt();
        let sigma_mean = sigma / (trials as f64).sqrt();
        assert!(
            (mean - 400.0).abs() < 3.0 * sigma_mean,
            "mean {mean} too far from 400 (3 sigma of the mean = {})",
            3.0 * sigma_mean
        );
    }

    #[test]
    fn validate_rejects_overfull() {
        assert!(ErParams { nodes: 4, edges: 7 }.validate().is_err());
        assert!(ErParams { nodes: 4, edges: 6 }.validate().is_ok());
    }
}
