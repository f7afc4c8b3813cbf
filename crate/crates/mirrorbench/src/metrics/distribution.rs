//! Labeled probability vectors and the Jensen-Shannon divergences over
//! degree and PageRank distributions.

use crate::graph::Graph;

/// A probability distribution over integer labels (degree values or bin
/// indices). Support is strictly increasing; probabilities are normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    support: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Build from (label, weight) pairs. Weights are normalized; labels must
    /// be unique. Zero-weight labels are kept in the support.
    pub fn from_counts<I>(counts: I) -> Self
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut pairs: Vec<(usize, f64)> = counts.into_iter().collect();
        pairs.sort_by_key(|&(label, _)| label);
        for win in pairs.windows(2) {
            assert!(win[0].0 < win[1].0, "duplicate label {}", win[1].0);
        }
        let total: f64 = pairs.iter().map(|&(_, w)| w).sum();
        assert!(total > 0.0, "distribution needs positive total weight");
        let support = pairs.iter().map(|&(l, _)| l).collect();
        let probs = pairs.iter().map(|&(_, w)| w / total).collect();
        Distribution { support, probs }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability mass at `label` (0 when outside the support).
    pub fn mass(&self, label: usize) -> f64 {
        match self.support.binary_search(&label) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }
}

/// Base-2 Jensen-Shannon divergence. Supports are merged to their union with
/// zero padding, so the value lies in [0, 1], is symmetric, and is 0 iff the
/// distributions are equal.
pub fn js_divergence(p: &Distribution, q: &Distribution) -> f64 {
    let mut labels: Vec<usize> = p.support().iter().chain(q.support()).copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let mut acc = 0.0;
    for &label in &labels {
        let a = p.mass(label);
        let b = q.mass(label);
        let m = 0.5 * (a + b);
        if a > 0.0 {
            acc += 0.5 * a * (a / m).log2();
        }
        if b > 0.0 {
            acc += 0.5 * b * (b / m).log2();
        }
    }
    acc.clamp(0.0, 1.0)
}

/// Degree distribution of `g` as a [`Distribution`].
pub fn degree_distribution(g: &Graph) -> Distribution {
    assert!(g.node_count() >= 1, "degree distribution needs nodes");
    Distribution::from_counts(
        g.degree_histogram()
            .counts
            .into_iter()
            .map(|(d, c)| (d, c as f64)),
    )
}

/// JS divergence between the degree distributions of two graphs.
pub fn degree_js(g1: &Graph, g2: &Graph) -> f64 {
    js_divergence(&degree_distribution(g1), &degree_distribution(g2))
}

/// Number of equal-width bins used for PageRank histograms.
pub const PAGERANK_BINS: usize = 100;

/// Bin both graphs' PageRank scores into 100 equal-width bins on
/// [0, max PR over both graphs] and take the JS divergence of the two
/// binned histograms.
pub fn pagerank_js(g1: &Graph, g2: &Graph) -> f64 {
    let pr1 = g1.pagerank_default().scores;
    let pr2 = g2.pagerank_default().scores;
    pagerank_js_from_scores(&pr1, &pr2)
}

pub(crate) fn pagerank_js_from_scores(pr1: &[f64], pr2: &[f64]) -> f64 {
    assert!(
        !pr1.is_empty() && !pr2.is_empty(),
        "pagerank_js needs non-empty graphs"
    );
    let max_pr = pr1
        .iter()
        .chain(pr2.iter())
        .fold(0.0f64, |acc, &x| acc.max(x));
    let bin = |x: f64| -> usize {
        if max_pr <= 0.0 {
            return 0;
        }
        (((x / max_pr) * PAGERANK_BINS as f64) as usize).min(PAGERANK_BINS - 1)
    };
    let histogram = |scores: &[f64]| -> Distribution {
        let mut counts = vec![0usize; PAGERANK_BINS];
        for &x in scores {
            counts[bin(x)] += 1;
        }
        Distribution::from_counts(
            counts
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(i, c)| (i, c as f64)),
        )
    };
    js_divergence(&histogram(pr1), &histogram(pr2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(usize, f64)]) -> Distribution {
        Distribution::from_counts(pairs.iter().copied())
    }

    #[test]
    fn js_zero_on_identical() {
        let p = dist(&[(0, 0.25), (1, 0.75)]);
        assert_eq!(js_divergence(&p, &p), 0.0);
    }

    #[test]
    fn js_one_on_disjoint_supports() {
        let p = dist(&[(0, 1.0)]);
        let q = dist(&[(1, 1.0)]);
        assert!((js_divergence(&p, &q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn js_closed_form_half_half_vs_point() {
        // JS([0.5,0.5],[1,0]) = H(0.75,0.25) - 1/2 = 0.311278...
        let p = dist(&[(0, 0.5), (1, 0.5)]);
        let q = dist(&[(0, 1.0)]);
        let expected = -(0.75f64.log2() * 0.75 + 0.25f64.log2() * 0.25) - 0.5;
        let got = js_divergence(&p, &q);
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 0.3113).abs() < 1e-4);
    }

    #[test]
    fn js_symmetric() {
        let p = dist(&[(0, 0.2), (2, 0.3), (5, 0.5)]);
        let q = dist(&[(1, 0.6), (2, 0.4)]);
        assert!((js_divergence(&p, &q) - js_divergence(&q, &p)).abs() < 1e-15);
    }

    #[test]
    fn degree_js_examples() {
        let k4 = Graph::complete(4);
        let c4 = Graph::cycle(4);
        assert_eq!(degree_js(&k4, &k4), 0.0);
        // single-atom supports {3} vs {2} are disjoint
        assert!((degree_js(&k4, &c4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pagerank_js_examples() {
        let c5 = Graph::cycle(5);
        let c7 = Graph::cycle(7);
        assert_eq!(pagerank_js(&c5, &c5), 0.0);
        // both uniform but at different values -> different bins
        assert!(pagerank_js(&c5, &c7) > 0.0);
    }
}
