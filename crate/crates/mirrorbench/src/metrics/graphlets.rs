//! Exact induced counts of the nine connected graphlets on 2-4 nodes, and
//! the relative graphlet-frequency distance built on them.
//!
//! Strategy: per-edge triangle counts and codegree tallies give the
//! non-induced subgraph counts in O(sum of squared degrees); the induced
//! counts follow from the inclusion relations between the 4-node classes.

use crate::graph::Graph;

/// Counts for the nine connected 2-4-node graphlets, in fixed order:
/// edge, wedge (2-star), triangle, 4-path, 3-star, 4-cycle,
/// tailed triangle, diamond (chordal 4-cycle), 4-clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphletVector(pub [u64; 9]);

/// Column labels matching the vector layout.
pub const GRAPHLET_NAMES: [&str; 9] = [
    "edge",
    "wedge",
    "triangle",
    "path4",
    "star3",
    "cycle4",
    "tailed_triangle",
    "diamond",
    "clique4",
];

impl GraphletVector {
    pub fn as_array(&self) -> [u64; 9] {
        self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Counts normalized by their own total; all-zero when the graph has no
    /// graphlets at all.
    pub fn relative_frequencies(&self) -> [f64; 9] {
        let total = self.total();
        if total == 0 {
            return [0.0; 9];
        }
        let mut out = [0.0; 9];
        for (o, &c) in out.iter_mut().zip(self.0.iter()) {
            *o = c as f64 / total as f64;
        }
        out
    }
}

/// Norm used by [`rgfd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RgfdNorm {
    L1,
    L2,
}

/// Exact induced counts of the nine 2-4-node graphlets.
pub fn graphlet_counts(g: &Graph) -> GraphletVector {
    let n = g.node_count();
    let m = g.edge_count() as u64;
    let degrees = g.degrees();

    // per-edge triangle counts and triangle-adjacent tallies
    let mut tri_times3 = 0u64; // sum over edges of per-edge triangle count
    let mut paw_non2 = 0u64; // 2 * non-induced tailed triangles
    let mut dia_non = 0u64;
    let mut k4_times6 = 0u64;
    let mut common = Vec::new();
    for (u, v) in g.edges() {
        common.clear();
        sorted_intersection(g.neighbors(u), g.neighbors(v), &mut common);
        let t = common.len() as u64;
        tri_times3 += t;
        if t > 0 {
            // both endpoints have degree >= 2 here, so no underflow
            paw_non2 += t * (degrees[u] as u64 + degrees[v] as u64 - 4);
        }
        dia_non += t * t.saturating_sub(1) / 2;
        for (i, &w) in common.iter().enumerate() {
            // adjacent pairs inside the common neighborhood close a K4
            k4_times6 += count_common_above(&common[i + 1..], g.neighbors(w));
        }
    }
    let triangles = tri_times3 / 3;

    // codegree pairs via 2-walk enumeration from each node
    let mut c4_non2 = 0u64; // 2 * non-induced 4-cycles
    let mut counts = vec![0u64; n];
    let mut touched = Vec::new();
    for u in 0..n {
        for &v in g.neighbors(u) {
            for &w in g.neighbors(v) {
                if w > u {
                    if counts[w] == 0 {
                        touched.push(w);
                    }
                    counts[w] += 1;
                }
            }
        }
        for &w in &touched {
            let c = counts[w];
            c4_non2 += c * (c - 1) / 2;
            counts[w] = 0;
        }
        touched.clear();
    }

    let choose2 = |d: u64| d * d.saturating_sub(1) / 2;
    let choose3 = |d: u64| {
        if d < 3 {
            0
        } else {
            d * (d - 1) * (d - 2) / 6
        }
    };
    let two_paths: u64 = degrees.iter().map(|&d| choose2(d as u64)).sum();
    let star_non: u64 = degrees.iter().map(|&d| choose3(d as u64)).sum();
    let path_non: u64 = g
        .edges()
        .map(|(u, v)| (degrees[u] as u64 - 1) * (degrees[v] as u64 - 1))
        .sum::<u64>()
        - tri_times3;

    // peel induced counts of the 4-node classes off the non-induced totals
    let k4 = (k4_times6 / 6) as i128;
    let dia = dia_non as i128 - 6 * k4;
    let paw = (paw_non2 / 2) as i128 - 4 * dia - 12 * k4;
    let c4 = (c4_non2 / 2) as i128 - dia - 3 * k4;
    let s4 = star_non as i128 - paw - 2 * dia - 4 * k4;
    let p4 = path_non as i128 - 2 * paw - 4 * c4 - 6 * dia - 12 * k4;
    let wedge = two_paths - 3 * triangles;

    debug_assert!(p4 >= 0 && s4 >= 0 && c4 >= 0 && paw >= 0 && dia >= 0);
    GraphletVector([
        m,
        wedge,
        triangles,
        p4 as u64,
        s4 as u64,
        c4 as u64,
        paw as u64,
        dia as u64,
        k4 as u64,
    ])
}

/// Relative graphlet-frequency distance: both count vectors are normalized
/// to frequencies, then compared with the requested norm.
pub fn rgfd(g1: &Graph, g2: &Graph, norm: RgfdNorm) -> f64 {
    rgfd_from_vectors(&graphlet_counts(g1), &graphlet_counts(g2), norm)
}

pub fn rgfd_from_vectors(v1: &GraphletVector, v2: &GraphletVector, norm: RgfdNorm) -> f64 {
    let a = v1.relative_frequencies();
    let b = v2.relative_frequencies();
    match norm {
        RgfdNorm::L1 => a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum(),
        RgfdNorm::L2 => a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
    }
}

fn sorted_intersection(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Count elements of sorted `a` that also occur in sorted `b`.
fn count_common_above(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut count = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Brute-force induced-subgraph enumeration over all 2-4 node subsets.
/// Exponential; test oracle for [`graphlet_counts`], kept independent of it.
pub fn graphlet_counts_brute_force(g: &Graph) -> GraphletVector {
    let n = g.node_count();
    let mut out = [0u64; 9];
    out[0] = g.edge_count() as u64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let e = [g.has_edge(a, b), g.has_edge(a, c), g.has_edge(b, c)];
                match e.iter().filter(|&&x| x).count() {
                    2 => out[1] += 1, // wedge
                    3 => out[2] += 1, // triangle
                    _ => {}
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if let Some(idx) = classify_four(g, [a, b, c, d]) {
                        out[idx] += 1;
                    }
                }
            }
        }
    }
    GraphletVector(out)
}

/// Classify the induced subgraph on four nodes; `None` when disconnected.
fn classify_four(g: &Graph, nodes: [usize; 4]) -> Option<usize> {
    let mut deg = [0usize; 4];
    let mut edges = 0usize;
    for i in 0..4 {
        for j in i + 1..4 {
            if g.has_edge(nodes[i], nodes[j]) {
                deg[i] += 1;
                deg[j] += 1;
                edges += 1;
            }
        }
    }
    deg.sort_unstable();
    match (edges, deg) {
        (3, [1, 1, 2, 2]) => Some(3),       // 4-path
        (3, [1, 1, 1, 3]) => Some(4),       // 3-star
        (4, [2, 2, 2, 2]) => Some(5),       // 4-cycle
        (4, [1, 2, 2, 3]) => Some(6),       // tailed triangle
        (5, [2, 2, 3, 3]) => Some(7),       // diamond
        (6, [3, 3, 3, 3]) => Some(8),       // 4-clique
        _ => None,                          // disconnected (or 3 edges forming a triangle + isolate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_counts() {
        let v = graphlet_counts(&Graph::complete(4));
        assert_eq!(v.as_array(), [6, 0, 4, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn c4_counts() {
        let v = graphlet_counts(&Graph::cycle(4));
        assert_eq!(v.as_array(), [4, 4, 0, 0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn p3_counts() {
        let v = graphlet_counts(&Graph::path(3));
        assert_eq!(v.as_array(), [2, 1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn star_and_path_counts() {
        // star with 3 leaves is exactly one 3-star
        let v = graphlet_counts(&Graph::star(3));
        assert_eq!(v.as_array(), [3, 3, 0, 0, 1, 0, 0, 0, 0]);
        // path on 4 nodes is exactly one 4-path
        let v = graphlet_counts(&Graph::path(4));
        assert_eq!(v.as_array(), [3, 2, 0, 1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn diamond_and_paw_counts() {
        // diamond: K4 minus one edge
        let dia = Graph::from_pairs(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(graphlet_counts(&dia).as_array()[7], 1);
        // paw: triangle plus pendant
        let paw = Graph::from_pairs(4, vec![(0, 1), (1, 2), (2, 0), (0, 3)]);
        assert_eq!(graphlet_counts(&paw).as_array()[6], 1);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for round in 0..60 {
            let n = 4 + (next() % 9) as usize;
            let threshold = 20 + (round % 6) * 12;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if next() % 100 < threshold {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_pairs(n, edges);
            assert_eq!(
                graphlet_counts(&g),
                graphlet_counts_brute_force(&g),
                "mismatch on n={n} m={}",
                g.edge_count()
            );
        }
    }

    #[test]
    fn rgfd_examples() {
        let k4 = Graph::complete(4);
        let p3 = Graph::path(3);
        assert_eq!(rgfd(&k4, &k4, RgfdNorm::L1), 0.0);
        assert_eq!(rgfd(&k4, &k4, RgfdNorm::L2), 0.0);
        // frozen from the two oracle vectors: |6/11-2/3| + 1/3 + 4/11 + 1/11 = 10/11
        let d = rgfd(&k4, &p3, RgfdNorm::L1);
        assert!((d - 10.0 / 11.0).abs() < 1e-12, "got {d}");
    }

    #[test]
    fn rgfd_handles_empty_graphs() {
        let e = Graph::empty(5);
        let k4 = Graph::complete(4);
        let d = rgfd(&e, &k4, RgfdNorm::L1);
        assert!(d > 0.0 && d.is_finite());
        assert_eq!(rgfd(&e, &e, RgfdNorm::L1), 0.0);
    }
}
