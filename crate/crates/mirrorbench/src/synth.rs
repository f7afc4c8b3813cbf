//! Synthetic source graphs: the clique ring and random tree used as
//! reference inputs, an ER convenience wrapper, and a preferential
//! attachment generator for power-law-ish test sources.

use crate::graph::Graph;
use crate::models::{generate_er, seeded_rng, ErParams, RngSeed};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("clique ring needs at least 3 cliques, got {0}")]
    TooFewCliques(usize),
    #[error("clique ring needs clique size >= 2, got {0}")]
    CliqueTooSmall(usize),
    #[error("tree needs at least 1 node")]
    EmptyTree,
}

/// A ring of `num_cliques` disjoint K_{clique_size} cliques. Within clique
/// t, local node 0 is the ring entry and local node 1 the exit; clique t's
/// exit connects to clique t+1's entry, wrapping around.
pub fn make_clique_ring(num_cliques: usize, clique_size: usize) -> Result<Graph, SynthError> {
    if num_cliques < 3 {
        return Err(SynthError::TooFewCliques(num_cliques));
    }
    if clique_size < 2 {
        return Err(SynthError::CliqueTooSmall(clique_size));
    }
    let n = num_cliques * clique_size;
    let mut edges = Vec::new();
    for t in 0..num_cliques {
        let base = t * clique_size;
        for i in 0..clique_size {
            for j in i + 1..clique_size {
                edges.push((base + i, base + j));
            }
        }
        let next_base = ((t + 1) % num_cliques) * clique_size;
        edges.push((base + 1, next_base));
    }
    Ok(Graph::from_pairs(n, edges))
}

/// Random tree grown breadth-first from a root: each expanded node draws
/// 2, 3, or 4 children uniformly until the node count reaches
/// `target_nodes`; nodes still queued after that get no children. The
/// result has between `target_nodes` and `target_nodes + 3` nodes.
pub fn make_random_tree(target_nodes: usize, seed: RngSeed) -> Result<Graph, SynthError> {
    if target_nodes == 0 {
        return Err(SynthError::EmptyTree);
    }
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    let mut count = 1usize; // the root
    let mut queue = std::collections::VecDeque::from([0usize]);
    while count < target_nodes {
        let parent = queue.pop_front().expect("growth queue exhausted early");
        let children = rng.random_range(2..=4usize);
        for _ in 0..children {
            edges.push((parent, count));
            queue.push_back(count);
            count += 1;
        }
    }
    Ok(Graph::from_pairs(count, edges))
}

/// G(n, p) with p chosen to hit `edges` in expectation.
pub fn make_er(nodes: usize, edges: usize, seed: RngSeed) -> Graph {
    generate_er(&ErParams { nodes, edges }, seed)
}

/// Preferential attachment: each new node attaches to `edges_per_node`
/// distinct existing nodes sampled proportionally to degree (plus one), for
/// heavy-tailed degree sequences.
pub fn make_preferential_attachment(nodes: usize, edges_per_node: usize, seed: RngSeed) -> Graph {
    make_powerlaw_cluster(nodes, edges_per_node, 0.0, seed)
}

/// Preferential attachment with triangle closure: after each preferential
/// pick, the next attachment closes a triangle through it with probability
/// `triangle_prob`. Produces heavy-tailed degree sequences with tunable
/// clustering, in the spirit of real-world social and transport graphs.
pub fn make_powerlaw_cluster(
    nodes: usize,
    edges_per_node: usize,
    triangle_prob: f64,
    seed: RngSeed,
) -> Graph {
    assert!(edges_per_node >= 1);
    assert!((0.0..=1.0).contains(&triangle_prob));
    let m0 = (edges_per_node + 1).min(nodes);
    let mut edges = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let push_edge = |edges: &mut Vec<(usize, usize)>,
                         adj: &mut Vec<Vec<usize>>,
                         endpoints: &mut Vec<usize>,
                         u: usize,
                         v: usize| {
        edges.push((u, v));
        adj[u].push(v);
        adj[v].push(u);
        endpoints.push(u);
        endpoints.push(v);
    };
    // endpoints repeated by degree: sampling uniformly from this list is
    // degree-proportional sampling
    let mut endpoints: Vec<usize> = Vec::new();
    for u in 0..m0 {
        for v in u + 1..m0 {
            push_edge(&mut edges, &mut adj, &mut endpoints, u, v);
        }
    }
    let mut rng = seeded_rng(seed);
    for v in m0..nodes {
        let mut chosen: Vec<usize> = Vec::with_capacity(edges_per_node);
        let mut last_pick: Option<usize> = None;
        while chosen.len() < edges_per_node.min(v) {
            let candidate = match last_pick {
                // closing step: a random neighbor of the previous pick
                Some(prev) if rng.random::<f64>() < triangle_prob => {
                    adj[prev][rng.random_range(0..adj[prev].len())]
                }
                _ => endpoints[rng.random_range(0..endpoints.len())],
            };
            if candidate != v && !chosen.contains(&candidate) {
                chosen.push(candidate);
                last_pick = Some(candidate);
            } else {
                last_pick = None; // fall back to a preferential pick
            }
        }
        for &u in &chosen {
            push_edge(&mut edges, &mut adj, &mut endpoints, u, v);
        }
    }
    Graph::from_pairs(nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_ring_reference_statistics() {
        let g = make_clique_ring(500, 4).unwrap();
        assert_eq!(g.node_count(), 2000);
        assert_eq!(g.edge_count(), 3500);
        assert_eq!(g.count_triangles(), 2000);
        assert!((g.average_clustering() - 0.75).abs() < 1e-12);
        // two ring-connector nodes per clique have degree 4, the rest 3
        assert_eq!(
            g.degree_histogram().counts,
            [(3, 1000), (4, 1000)].into_iter().collect()
        );
        let expected_density = 3500.0 / (2000.0 * 1999.0 / 2.0);
        assert!((g.density() - expected_density).abs() < 1e-15);
    }

    #[test]
    fn tiny_clique_ring() {
        // 3 cliques of size 2: 3 clique edges + 3 ring edges
        let g = make_clique_ring(3, 2).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.connected_components().count, 1);
    }

    #[test]
    fn clique_ring_rejects_bad_sizes() {
        assert!(make_clique_ring(2, 4).is_err());
        assert!(make_clique_ring(5, 1).is_err());
    }

    #[test]
    fn random_tree_is_a_tree() {
        for seed in 0..5 {
            let g = make_random_tree(200, seed).unwrap();
            let n = g.node_count();
            assert!((200..=203).contains(&n), "n = {n}");
            assert_eq!(g.edge_count(), n - 1);
            assert_eq!(g.connected_components().count, 1);
            assert_eq!(g.count_triangles(), 0);
            assert_eq!(g.average_clustering(), 0.0);
        }
    }

    #[test]
    fn single_node_tree() {
        let g = make_random_tree(1, 3).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn preferential_attachment_is_heavy_tailed() {
        let g = make_preferential_attachment(500, 3, 11);
        assert_eq!(g.node_count(), 500);
        let max_degree = g.degrees().into_iter().max().unwrap();
        let mean_degree = 2.0 * g.edge_count() as f64 / 500.0;
        assert!(
            max_degree as f64 > 4.0 * mean_degree,
            "max degree {max_degree} vs mean {mean_degree}"
        );
        assert_eq!(g.connected_components().count, 1);
    }
}
