//! Property tests for the structural invariants: graph construction,
//! PageRank mass, JS divergence axioms, parameter serialization, and the
//! edge-list file format.

use mirrorbench::graph::Graph;
use mirrorbench::metrics::distribution::{js_divergence, Distribution};
use mirrorbench::models::{
    BterParams, ChungLuParams, ErParams, Initiator, KroneckerParams, ModelParams, SbmParams,
};
use proptest::prelude::*;

fn arb_edge_list() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((0u64..30, 0u64..30), 0..80)
}

proptest! {
    #[test]
    fn constructed_graphs_are_simple_and_symmetric(pairs in arb_edge_list()) {
        let g = Graph::from_edge_list(pairs);
        let mut degree_total = 0usize;
        for u in 0..g.node_count() {
            prop_assert!(!g.has_edge(u, u));
            degree_total += g.degree(u);
            for &v in g.neighbors(u) {
                prop_assert!(g.has_edge(v, u));
            }
            // sorted and deduplicated neighbor lists
            prop_assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert_eq!(degree_total, 2 * g.edge_count());
    }

    #[test]
    fn pagerank_mass_is_conserved(pairs in arb_edge_list()) {
        let g = Graph::from_edge_list(pairs);
        if g.node_count() == 0 {
            return Ok(());
        }
        let pr = g.pagerank_default();
        let sum: f64 = pr.scores.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-8, "sum = {}", sum);
        prop_assert!(pr.scores.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn js_divergence_axioms(
        weights_p in prop::collection::vec(0.01f64..10.0, 1..12),
        weights_q in prop::collection::vec(0.01f64..10.0, 1..12),
    ) {
        let p = Distribution::from_counts(weights_p.iter().copied().enumerate());
        let q = Distribution::from_counts(weights_q.iter().copied().enumerate());
        let pq = js_divergence(&p, &q);
        let qp = js_divergence(&q, &p);
        prop_assert!((0.0..=1.0).contains(&pq));
        prop_assert!((pq - qp).abs() <= 1e-12);
        prop_assert!(js_divergence(&p, &p) == 0.0);
    }

    #[test]
    fn apl_of_connected_graph_is_bounded(
        n in 2usize..40,
        extra in prop::collection::vec((0usize..40, 0usize..40), 0..40),
    ) {
        // spanning path plus arbitrary extra edges keeps the graph connected
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        edges.extend(extra.into_iter().map(|(a, b)| (a % n, b % n)));
        let g = Graph::from_pairs(n, edges);
        let apl = g.average_path_length().unwrap();
        prop_assert!(apl >= 1.0 && apl <= (n - 1) as f64, "apl = {}", apl);
    }
}

fn arb_params() -> impl Strategy<Value = ModelParams> {
    let er = (2usize..40).prop_flat_map(|n| {
        (Just(n), 0usize..=n * (n - 1) / 2)
            .prop_map(|(nodes, edges)| ModelParams::Er(ErParams { nodes, edges }))
    });
    let chung_lu = prop::collection::vec(0.0f64..8.0, 1..30)
        .prop_map(|weights| ModelParams::ChungLu(ChungLuParams { weights }));
    let kron = (0.001f64..=0.999, 0.001f64..=0.999, 0.001f64..=0.999, 1u32..10).prop_map(
        |(a, b, c, k)| {
            ModelParams::Kronecker(KroneckerParams {
                initiator: Initiator::new(a, b, c).unwrap(),
                k,
            })
        },
    );
    let sbm = prop::collection::vec(1usize..6, 1..4).prop_flat_map(|sizes| {
        let blocks = sizes.len();
        let assignment: Vec<usize> = sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect();
        let max_cell: usize = 25;
        prop::collection::vec(0usize..=max_cell, blocks * blocks).prop_map(move |cells| {
            let mut matrix = vec![vec![0usize; blocks]; blocks];
            for r in 0..blocks {
                for s in r..blocks {
                    let raw = cells[r * blocks + s];
                    let cap = if r == s {
                        sizes[r] * (sizes[r] - 1) / 2
                    } else {
                        sizes[r] * sizes[s]
                    };
                    matrix[r][s] = raw.min(cap);
                    matrix[s][r] = matrix[r][s];
                }
            }
            ModelParams::Sbm(SbmParams {
                assignment: assignment.clone(),
                block_sizes: sizes.clone(),
                block_edge_counts: matrix,
            })
        })
    });
    let bter = prop::collection::btree_map(0usize..12, 1usize..8, 1..6).prop_flat_map(|counts| {
        let degrees: Vec<usize> = counts.keys().copied().collect();
        prop::collection::vec(0.0f64..=1.0, degrees.len()).prop_map(move |ccs| {
            let clustering = degrees
                .iter()
                .copied()
                .zip(ccs.iter().copied().map(|c| if c > 0.0 { c } else { 0.0 }))
                .map(|(d, c)| if d < 2 { (d, 0.0) } else { (d, c) })
                .collect();
            ModelParams::Bter(BterParams {
                degree_counts: counts.clone(),
                clustering_by_degree: clustering,
            })
        })
    });
    prop_oneof![er, chung_lu, kron, sbm, bter]
}

proptest! {
    #[test]
    fn params_json_round_trip(params in arb_params()) {
        params.validate().unwrap();
        let json = serde_json::to_string(&params).unwrap();
        let back: ModelParams = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, params);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_file_round_trip(pairs in arb_edge_list(), isolates in 0usize..4) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let base = Graph::from_edge_list(pairs);
        // append trailing isolated nodes, the hard case for round trips
        let g = Graph::from_pairs(base.node_count() + isolates, base.edges());
        mirrorbench::io::write_edge_list(&path, &g).unwrap();
        let back = mirrorbench::io::read_edge_list(&path).unwrap();
        prop_assert_eq!(back.node_count(), g.node_count());
        prop_assert!(back.edges().eq(g.edges()));
    }

    #[test]
    fn generation_seed_determinism(params in arb_params(), seed in any::<u64>()) {
        let a = mirrorbench::models::generate_unchecked(&params, seed);
        let b = mirrorbench::models::generate_unchecked(&params, seed);
        prop_assert_eq!(a.node_count(), b.node_count());
        prop_assert!(a.edges().eq(b.edges()));
    }
}
