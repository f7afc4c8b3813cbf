//! Chung-Lu expected-degree model: the fitted weights are the exact degree
//! sequence; pairs connect with probability min(1, w_i w_j / sum(w)).

use super::{seeded_rng, ModelError, RngSeed};
use crate::graph::Graph;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChungLuParams {
    pub weights: Vec<f64>,
}

impl ChungLuParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(ModelError::InvalidParams(
                "chung-lu: weights must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Exact expected edge count sum_{i<j} min(1, w_i w_j / sum(w)).
    pub fn expected_edges(&self) -> f64 {
        let total: f64 = self.weights.iter().sum();
        if total <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..self.weights.len() {
            for j in i + 1..self.weights.len() {
                acc += (self.weights[i] * self.weights[j] / total).min(1.0);
            }
        }
        acc
    }
}

pub fn fit_chung_lu(g: &Graph) -> Result<ChungLuParams, ModelError> {
    if g.edge_count() == 0 {
        return Err(ModelError::DegenerateInput(
            "chung-lu fit needs at least one edge".into(),
        ));
    }
    Ok(ChungLuParams {
        weights: g.degrees().iter().map(|&d| d as f64).collect(),
    })
}

pub fn generate_chung_lu(params: &ChungLuParams, seed: RngSeed) -> Graph {
    let n = params.weights.len();
    let total: f64 = params.weights.iter().sum();
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    if total > 0.0 {
        for i in 0..n {
            let wi = params.weights[i];
            if wi == 0.0 {
                continue;
            }
            for j in i + 1..n {
                let p = (wi * params.weights[j] / total).min(1.0);
                if p > 0.0 && rng.random::<f64>() < p {
                    edges.push((i, j));
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
    fn fit_is_degree_sequence() {
        assert_eq!(
            fit_chung_lu(&Graph::complete(4)).unwrap().weights,
            vec![3.0, 3.0, 3.0, 3.0]
        );
        assert_eq!(
            fit_chung_lu(&Graph::star(3)).unwrap().weights,
            vec![3.0, 1.0, 1.0, 1.0]
        );
        assert!(fit_chung_lu(&Graph::empty(5)).is_err());
    }

    #[test]
    fn two_node_edge_appears_about_half_the_time() {
        let params = ChungLuParams {
            weights: vec![1.0, 1.0],
        };
        let hits: usize = (0..400)
            .filter(|&s| generate_chung_lu(&params, s).edge_count() == 1)
            .count();
        // p = 0.5; 400 draws, 3 sigma ~ 30
        assert!((170..=230).contains(&hits), "got {hits} / 400");
    }

    #[test]
    fn single_positive_weight_gives_empty_graph() {
        let params = ChungLuParams {
            weights: vec![0.0, 0.0, 5.0, 0.0],
        };
        let g = generate_chung_lu(&params, 3);
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn empirical_mean_matches_analytic_expectation() {
        let weights: Vec<f64> = (0..40).map(|i| 1.0 + (i % 5) as f64).collect();
        let params = ChungLuParams { weights };
        let expected = params.expected_edges();
        // per-sample variance: sum p(1-p)
        let total: f64 = params.weights.iter().sum();
        let mut var = 0.0;
        for i in 0..params.weights.len() {
            for j in i + 1..params.weights.len() {
                let p = (params.weights[i] * params.weights[j] / total).min(1.0);
                var += p * (1.0 - p);
            }
        }
        let trials = 300;
        let mean = (0..trials)
            .map(|s| generate_chung_lu(&params, s as u64).edge_count() as f64)
            .sum::<f64>()
            / trials as f64;
        let sigma_mean = (var / trials as f64).sqrt();
        assert!(
            (mean - expected).abs() < 3.0 * sigma_mean,
            "mean {mean} vs expected {expected} (3sm = {})",
            3.0 * sigma_mean
        );
    }
}
