//! Greedy modularity-maximizing agglomeration (Clauset-Newman-Moore style)
//! with a deterministic tie-break: among equal gains the pair with the
//! lowest block ids wins. Communities are identified by their smallest
//! member node while merging.

use crate::graph::Graph;
use std::collections::BTreeMap;

/// Assign every node to a block; labels are dense from 0, ordered by each
/// block's smallest member. A graph without edges yields one block per node.
pub fn detect_communities(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let m = g.edge_count();
    if m == 0 {
        return (0..n).collect();
    }
    let m_f = m as f64;

    // community id = smallest member node id
    let mut degree_sum: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut between: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (u, v) in g.edges() {
        *between.entry((u, v)).or_insert(0.0) += 1.0;
    }

    loop {
        let mut best: Option<((usize, usize), f64)> = None;
        for (&pair, &e) in &between {
            let (i, j) = pair;
            let gain = e / m_f - degree_sum[i] * degree_sum[j] / (2.0 * m_f * m_f);
            match best {
                Some((_, bg)) if gain <= bg => {}
                _ => best = Some((pair, gain)),
            }
        }
        let Some(((i, j), gain)) = best else { break };
        if gain <= 0.0 {
            break;
        }

        // merge j into i (i < j by key construction)
        degree_sum[i] += degree_sum[j];
        let moved = std::mem::take(&mut members[j]);
        members[i].extend(moved);

        let stale: Vec<((usize, usize), f64)> = between
            .iter()
            .filter(|&(&(a, b), _)| a == j || b == j)
            .map(|(&k, &v)| (k, v))
            .collect();
        for ((a, b), count) in stale {
            between.remove(&(a, b));
            let other = if a == j { b } else { a };
            if other == i {
                continue; // now internal to the merged community
            }
            let key = (other.min(i), other.max(i));
            *between.entry(key).or_insert(0.0) += count;
        }
    }

    // label blocks densely in order of smallest member
    let mut labels = vec![0usize; n];
    let mut next = 0usize;
    for block in &members {
        if !block.is_empty() {
            for &v in block {
                labels[v] = next;
            }
            next += 1;
        }
    }
    labels
}

/// Newman modularity of a block assignment.
pub fn modularity(g: &Graph, assignment: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let blocks = assignment.iter().copied().max().map_or(0, |b| b + 1);
    let mut internal = vec![0.0f64; blocks];
    let mut degree_sum = vec![0.0f64; blocks];
    for (u, v) in g.edges() {
        if assignment[u] == assignment[v] {
            internal[assignment[u]] += 1.0;
        }
    }
    for v in 0..g.node_count() {
        degree_sum[assignment[v]] += g.degree(v) as f64;
    }
    (0..blocks)
        .map(|b| internal[b] / m - (degree_sum[b] / (2.0 * m)).powi(2))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_k5_bridge() -> Graph {
        let mut edges = Vec::new();
        for u in 0..5usize {
            for v in u + 1..5 {
                edges.push((u, v));
                edges.push((u + 5, v + 5));
            }
        }
        edges.push((0, 5)); // bridge
        Graph::from_pairs(10, edges)
    }

    #[test]
    fn splits_two_cliques() {
        let g = two_k5_bridge();
        let labels = detect_communities(&g);
        assert_eq!(labels[..5], [0, 0, 0, 0, 0]);
        assert_eq!(labels[5..], [1, 1, 1, 1, 1]);
    }

    #[test]
    fn clique_split_maximizes_over_two_partitions() {
        // oracle: exhaustive modularity over all 2-partitions of 10 nodes
        let g = two_k5_bridge();
        let clique_split: Vec<usize> = (0..10).map(|v| usize::from(v >= 5)).collect();
        let clique_q = modularity(&g, &clique_split);
        for mask in 1u32..(1 << 9) {
            // node 9 fixed in block 1 to halve the symmetric search
            let assignment: Vec<usize> =
                (0..10).map(|v| usize::from(v == 9 || mask >> v & 1 == 1)).collect();
            let q = modularity(&g, &assignment);
            assert!(
                q <= clique_q + 1e-12,
                "partition {assignment:?} beats the clique split: {q} > {clique_q}"
            );
        }
    }

    #[test]
    fn k4_is_one_block() {
        let labels = detect_communities(&Graph::complete(4));
        assert_eq!(labels, vec![0, 0, 0, 0]);
    }

    #[test]
    fn disconnected_cliques_split() {
        let two_k2 = Graph::from_pairs(4, vec![(0, 1), (2, 3)]);
        assert_eq!(detect_communities(&two_k2), vec![0, 0, 1, 1]);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        assert_eq!(detect_communities(&Graph::empty(3)), vec![0, 1, 2]);
    }

    #[test]
    fn isolates_keep_their_own_block() {
        let g = Graph::from_pairs(5, vec![(0, 1), (1, 2), (0, 2)]);
        let labels = detect_communities(&g);
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[1], labels[2]);
        assert_ne!(labels[3], labels[0]);
        assert_ne!(labels[3], labels[4]);
        // labels dense
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted, (0..sorted.len()).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic_output() {
        let g = two_k5_bridge();
        assert_eq!(detect_communities(&g), detect_communities(&g));
    }
}
