//! Undirected simple-graph representation and the structural primitives the
//! models and comparison metrics are built on.
//!
//! Node ids are dense in `0..n`. Adjacency is stored as per-node sorted
//! neighbor lists; a `Graph` is immutable after construction and safe to
//! share across threads.

use std::collections::HashMap;

/// Sentinel distance for nodes unreachable from a BFS source.
pub const UNREACHABLE: usize = usize::MAX;

/// An undirected simple graph: no self-loops, no duplicate edges,
/// symmetric adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Exact degree counts: degree -> number of nodes with that degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub counts: std::collections::BTreeMap<usize, usize>,
}

/// PageRank scores plus a convergence flag for runs that hit `max_iter`.
#[derive(Debug, Clone)]
pub struct PageRank {
    pub scores: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Connected-component labels, dense from 0 in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Build from raw id pairs. Self-loops are dropped, duplicate edges
    /// collapsed, and ids compacted to `0..n` preserving the order of first
    /// appearance. An empty input yields the empty graph.
    pub fn from_edge_list<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut remap: HashMap<u64, usize> = HashMap::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut next_id = 0usize;
        let intern = |raw: u64, remap: &mut HashMap<u64, usize>, next: &mut usize| -> usize {
            *remap.entry(raw).or_insert_with(|| {
                let id = *next;
                *next += 1;
                id
            })
        };
        for (a, b) in pairs {
            let u = intern(a, &mut remap, &mut next_id);
            let v = intern(b, &mut remap, &mut next_id);
            if u != v {
                edges.push((u, v));
            }
        }
        Graph::from_pairs(next_id, edges)
    }

    /// Build from pairs over an already-dense id range `0..n`. Self-loops are
    /// dropped and duplicates collapsed; isolated nodes are retained.
    ///
    /// Panics if a pair references an id `>= n`.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in pairs {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for n={n}");
            if u == v {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0usize;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        debug_assert!(m.is_multiple_of(2));
        Graph {
            adj,
            edge_count: m / 2,
        }
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        Graph::from_pairs(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// Simple path on `n` nodes.
    pub fn path(n: usize) -> Self {
        Graph::from_pairs(n, (1..n).map(|v| (v - 1, v)))
    }

    /// Cycle on `n` nodes (`n >= 3`).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Graph::from_pairs(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    /// Star with a hub (node 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_pairs(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Iterate every undirected edge once as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Exact degree counts.
    pub fn degree_histogram(&self) -> DegreeHistogram {
        let mut counts = std::collections::BTreeMap::new();
        for list in &self.adj {
            *counts.entry(list.len()).or_insert(0usize) += 1;
        }
        DegreeHistogram { counts }
    }

    /// 2m / (n(n-1)); 0 when `n < 2`.
    pub fn density(&self) -> f64 {
        let n = self.node_count();
        if n < 2 {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / (n as f64 * (n - 1) as f64)
    }

    /// Unweighted shortest-path distances from `source`; unreachable nodes
    /// are marked [`UNREACHABLE`].
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        assert!(source < self.node_count(), "BFS source out of range");
        let mut dist = vec![UNREACHABLE; self.node_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adj[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components with labels dense from 0.
    pub fn connected_components(&self) -> Components {
        let n = self.node_count();
        let mut labels = vec![usize::MAX; n];
        let mut count = 0usize;
        let mut stack = Vec::new();
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if labels[v] == usize::MAX {
                        labels[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        Components { labels, count }
    }

    /// PageRank by power iteration on the undirected random-walk matrix.
    /// Mass on degree-0 nodes is redistributed uniformly. Scores sum to 1.
    /// If the iteration does not reach `tol` (L1 change) within `max_iter`,
    /// the last iterate is returned with `converged = false`.
    pub fn pagerank(&self, damping: f64, tol: f64, max_iter: usize) -> PageRank {
        assert!(
            damping > 0.0 && damping < 1.0,
            "damping must be in (0,1), got {damping}"
        );
        let n = self.node_count();
        if n == 0 {
            return PageRank {
                scores: Vec::new(),
                converged: true,
                iterations: 0,
            };
        }
        let nf = n as f64;
        let mut rank = vec![1.0 / nf; n];
        let mut next = vec![0.0; n];
        for it in 1..=max_iter {
            let dangling: f64 = (0..n)
                .filter(|&v| self.adj[v].is_empty())
                .map(|v| rank[v])
                .sum();
            let base = (1.0 - damping) / nf + damping * dangling / nf;
            next.iter_mut().for_each(|x| *x = base);
            for (list, &mass) in self.adj.iter().zip(rank.iter()) {
                if list.is_empty() {
                    continue;
                }
                let share = damping * mass / list.len() as f64;
                for &v in list {
                    next[v] += share;
                }
            }
            let delta: f64 = rank
                .iter()
                .zip(next.iter())
                .map(|(a, b)| (a - b).abs())
                .sum();
            std::mem::swap(&mut rank, &mut next);
            if delta < tol {
                return PageRank {
                    scores: rank,
                    converged: true,
                    iterations: it,
                };
            }
        }
        PageRank {
            scores: rank,
            converged: false,
            iterations: max_iter,
        }
    }

    /// PageRank with the conventional defaults (0.85, 1e-8, 100 iterations).
    pub fn pagerank_default(&self) -> PageRank {
        self.pagerank(0.85, 1e-8, 100)
    }

    /// Number of unordered node triples forming triangles, by sorted-adjacency
    /// intersection.
    pub fn count_triangles(&self) -> u64 {
        let mut total = 0u64;
        for (u, v) in self.edges() {
            // common neighbors w > v: each triangle counted at its two
            // smallest vertices exactly once
            total += intersect_above(&self.adj[u], &self.adj[v], v);
        }
        total
    }

    /// Local clustering coefficient per node; degree < 2 contributes 0.
    pub fn local_clustering(&self) -> Vec<f64> {
        let n = self.node_count();
        let mut tri = vec![0u64; n];
        for (u, v) in self.edges() {
            let mut it_a = self.adj[u].iter().peekable();
            let mut it_b = self.adj[v].iter().peekable();
            while let (Some(&&a), Some(&&b)) = (it_a.peek(), it_b.peek()) {
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => {
                        it_a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        it_b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        if a > v {
                            tri[u] += 1;
                            tri[v] += 1;
                            tri[a] += 1;
                        }
                        it_a.next();
                        it_b.next();
                    }
                }
            }
        }
        (0..n)
            .map(|v| {
                let d = self.adj[v].len();
                if d < 2 {
                    0.0
                } else {
                    2.0 * tri[v] as f64 / (d as f64 * (d - 1) as f64)
                }
            })
            .collect()
    }

    /// Mean local clustering over all nodes; 0 for the empty graph.
    pub fn average_clustering(&self) -> f64 {
        let n = self.node_count();
        if n == 0 {
            return 0.0;
        }
        self.local_clustering().iter().sum::<f64>() / n as f64
    }

    /// Mean shortest-path distance over all ordered reachable pairs with
    /// distance >= 1 (within components). `None` when no such pair exists.
    pub fn average_path_length(&self) -> Option<f64> {
        self.apl_from_sources(0..self.node_count())
    }

    /// Sampled-source variant of [`Self::average_path_length`] for large
    /// graphs: BFS from at most `max_sources` evenly spaced sources.
    pub fn average_path_length_sampled(&self, max_sources: usize) -> Option<f64> {
        let n = self.node_count();
        if max_sources == 0 || n == 0 {
            return None;
        }
        if max_sources >= n {
            return self.average_path_length();
        }
        let step = n.div_ceil(max_sources);
        self.apl_from_sources((0..n).step_by(step))
    }

    fn apl_from_sources<I: Iterator<Item = usize>>(&self, sources: I) -> Option<f64> {
        let mut total = 0u128;
        let mut pairs = 0u64;
        for s in sources {
            for &d in &self.bfs_distances(s) {
                if d != UNREACHABLE && d >= 1 {
                    total += d as u128;
                    pairs += 1;
                }
            }
        }
        if pairs == 0 {
            None
        } else {
            Some(total as f64 / pairs as f64)
        }
    }
}

/// Count elements common to both sorted slices that are strictly greater
/// than `floor`.
fn intersect_above(a: &[usize], b: &[usize], floor: usize) -> u64 {
    let pa = a.partition_point(|&x| x <= floor);
    let pb = b.partition_point(|&x| x <= floor);
    let (mut i, mut j) = (pa, pb);
    let mut count = 0u64;
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
