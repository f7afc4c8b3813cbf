//! Two-phase BTER construction: dense Erdos-Renyi affinity blocks of
//! similar-degree nodes, then a Chung-Lu pass wiring the leftover expected
//! degree.

use super::{seeded_rng, ModelError, RngSeed};
use crate::graph::Graph;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BterParams {
    /// degree -> number of nodes with that degree
    #[serde(with = "pairs_map")]
    pub degree_counts: BTreeMap<usize, usize>,
    /// degree -> mean local clustering of nodes with that degree
    #[serde(with = "pairs_map")]
    pub clustering_by_degree: BTreeMap<usize, f64>,
}

/// Integer-keyed maps as ordered [key, value] pair arrays. JSON objects
/// force string keys, which do not survive the tagged-enum deserializer.
mod pairs_map {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S, V>(map: &BTreeMap<usize, V>, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        V: Serialize,
    {
        serializer.collect_seq(map.iter())
    }

    pub fn deserialize<'de, D, V>(deserializer: D) -> Result<BTreeMap<usize, V>, D::Error>
    where
        D: Deserializer<'de>,
        V: Deserialize<'de>,
    {
        let pairs: Vec<(usize, V)> = Vec::deserialize(deserializer)?;
        Ok(pairs.into_iter().collect())
    }
}

impl BterParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (&d, &cc) in &self.clustering_by_degree {
            if !(0.0..=1.0).contains(&cc) {
                return Err(ModelError::InvalidParams(format!(
                    "bter: clustering for degree {d} is {cc}, outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.degree_counts.values().sum()
    }
}

pub fn fit_bter(g: &Graph) -> Result<BterParams, ModelError> {
    if g.edge_count() == 0 {
        return Err(ModelError::DegenerateInput(
            "bter fit needs at least one edge".into(),
        ));
    }
    let degree_counts = g.degree_histogram().counts;
    let local = g.local_clustering();
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (v, &cc) in local.iter().enumerate() {
        let entry = sums.entry(g.degree(v)).or_insert((0.0, 0));
        entry.0 += cc;
        entry.1 += 1;
    }
    let clustering_by_degree = sums
        .into_iter()
        .map(|(d, (sum, count))| (d, if d < 2 { 0.0 } else { sum / count as f64 }))
        .collect();
    Ok(BterParams {
        degree_counts,
        clustering_by_degree,
    })
}

/// Phase 1 packs nodes of target degree >= 2, ascending, into affinity
/// blocks of d+1 nodes (d = smallest degree in the block) wired internally
/// as ER with connectivity rho = clustering^(1/3). Phase 2 runs Chung-Lu on
/// each node's leftover expected degree. Degree-1 nodes only participate in
/// phase 2.
pub fn generate_bter(params: &BterParams, seed: RngSeed) -> Graph {
    // node targets ascending by degree; ids follow this order
    let targets: Vec<usize> = params
        .degree_counts
        .iter()
        .flat_map(|(&d, &count)| std::iter::repeat_n(d, count))
        .collect();
    let n = targets.len();
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    let mut excess = vec![0.0f64; n];

    let mut pos = targets.partition_point(|&d| d < 2);
    for v in 0..pos {
        excess[v] = targets[v] as f64; // degree-0 contributes 0, degree-1 contributes 1
    }
    while pos < n {
        let d = targets[pos];
        let size = (d + 1).min(n - pos);
        let cc = params
            .clustering_by_degree
            .get(&d)
            .copied()
            .unwrap_or(0.0)
            .clamp(0.0, 1.0);
        let rho = cc.cbrt();
        if rho > 0.0 {
            for i in pos..pos + size {
                for j in i + 1..pos + size {
                    if rng.random::<f64>() < rho {
                        edges.push((i, j));
                    }
                }
            }
        }
        let internal = rho * (size - 1) as f64;
        for i in pos..pos + size {
            excess[i] = (targets[i] as f64 - internal).max(0.0);
        }
        pos += size;
    }

    let total_excess: f64 = excess.iter().sum();
    if total_excess > 0.0 {
        let active: Vec<usize> = (0..n).filter(|&v| excess[v] > 0.0).collect();
        for (idx, &i) in active.iter().enumerate() {
            for &j in &active[idx + 1..] {
                let p = (excess[i] * excess[j] / total_excess).min(1.0);
                if rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
    }
    Graph::from_pairs(n, edges)
}
