//! Graph-comparison metrics and the shared per-graph cache used when the
//! same graph participates in many comparisons.

pub mod distribution;
pub mod graphlets;
pub mod netlsd;
pub mod pca;
pub mod portrait;

pub use distribution::{degree_js, js_divergence, pagerank_js, Distribution};
pub use graphlets::{
    graphlet_counts, graphlet_counts_brute_force, rgfd, GraphletVector, RgfdNorm, GRAPHLET_NAMES,
};
pub use netlsd::{netlsd_descriptor, netlsd_distance, NetlsdDescriptor};
pub use pca::{pca_2d, Pca2d, PcaError};
pub use portrait::{portrait, portrait_divergence, Portrait, PortraitError};

use crate::graph::Graph;
use crate::spectral::{
    laplacian_spectrum, laplacian_spectrum_truncated, MatrixKind, SpectrumError,
    TRUNCATED_RANK_DEFAULT,
};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use thiserror::Error;

/// Euclidean distance between two Laplacian spectra, sorted descending and
/// zero-padded to a common length.
pub fn lambda_distance(g1: &Graph, g2: &Graph, kind: MatrixKind) -> Result<f64, SpectrumError> {
    let s1 = laplacian_spectrum(g1, kind)?;
    let s2 = laplacian_spectrum(g2, kind)?;
    Ok(lambda_distance_from(&s1.eigenvalues, &s2.eigenvalues))
}

/// Distance between two already-sorted spectra.
pub fn lambda_distance_from(e1: &[f64], e2: &[f64]) -> f64 {
    let len = e1.len().max(e2.len());
    (0..len)
        .map(|i| {
            let a = e1.get(i).copied().unwrap_or(0.0);
            let b = e2.get(i).copied().unwrap_or(0.0);
            (a - b) * (a - b)
        })
        .sum::<f64>()
        .sqrt()
}

/// Identifiers for the metrics exposed to the CLI and the CSV outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    DegreeJs,
    PagerankJs,
    Portrait,
    Lambda,
    RgfdL1,
    RgfdL2,
    Netlsd,
    AvgCc,
    AvgPl,
}

impl MetricId {
    pub const ALL: [MetricId; 9] = [
        MetricId::DegreeJs,
        MetricId::PagerankJs,
        MetricId::Portrait,
        MetricId::Lambda,
        MetricId::RgfdL1,
        MetricId::RgfdL2,
        MetricId::Netlsd,
        MetricId::AvgCc,
        MetricId::AvgPl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricId::DegreeJs => "degree-js",
            MetricId::PagerankJs => "pagerank-js",
            MetricId::Portrait => "portrait",
            MetricId::Lambda => "lambda",
            MetricId::RgfdL1 => "rgfd-l1",
            MetricId::RgfdL2 => "rgfd-l2",
            MetricId::Netlsd => "netlsd",
            MetricId::AvgCc => "avg-cc",
            MetricId::AvgPl => "avg-pl",
        }
    }

    /// Metrics that need an eigensolve.
    pub fn is_spectral(&self) -> bool {
        matches!(self, MetricId::Lambda | MetricId::Netlsd)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown metric id '{0}'")]
pub struct UnknownMetric(pub String);

impl FromStr for MetricId {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL
            .iter()
            .find(|m| m.as_str() == s)
            .copied()
            .ok_or_else(|| UnknownMetric(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error(transparent)]
    Portrait(#[from] PortraitError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// A graph plus lazily computed derived data. Construction is cheap; each
/// derived quantity is computed once on first use and is safe for concurrent
/// reads afterwards.
#[derive(Debug)]
pub struct CachedGraph {
    graph: Graph,
    pagerank: OnceLock<Vec<f64>>,
    portrait: OnceLock<Portrait>,
    graphlets: OnceLock<GraphletVector>,
    comb_spectrum: OnceLock<Vec<f64>>,
    netlsd: OnceLock<Result<NetlsdDescriptor, SpectrumError>>,
    avg_cc: OnceLock<f64>,
    avg_pl: OnceLock<f64>,
}

/// Node-count cutoff past which the per-graph summary switches to
/// sampled-source path lengths.
pub const APL_EXACT_LIMIT: usize = 5000;
const APL_SAMPLE_SOURCES: usize = 1024;

impl CachedGraph {
    pub fn new(graph: Graph) -> Self {
        CachedGraph {
            graph,
            pagerank: OnceLock::new(),
            portrait: OnceLock::new(),
            graphlets: OnceLock::new(),
            comb_spectrum: OnceLock::new(),
            netlsd: OnceLock::new(),
            avg_cc: OnceLock::new(),
            avg_pl: OnceLock::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pagerank(&self) -> &[f64] {
        self.pagerank
            .get_or_init(|| self.graph.pagerank_default().scores)
    }

    pub fn portrait(&self) -> &Portrait {
        self.portrait.get_or_init(|| portrait(&self.graph))
    }

    pub fn graphlets(&self) -> &GraphletVector {
        self.graphlets.get_or_init(|| graphlet_counts(&self.graph))
    }

    /// Combinatorial-Laplacian spectrum; graphs past the dense limit fall
    /// back to the truncated top-r solve so distances compare truncated
    /// lists.
    pub fn comb_spectrum(&self) -> &[f64] {
        self.comb_spectrum.get_or_init(|| {
            match laplacian_spectrum(&self.graph, MatrixKind::CombinatorialLaplacian) {
                Ok(s) => s.eigenvalues,
                Err(SpectrumError::TooLarge { .. }) => {
                    laplacian_spectrum_truncated(
                        &self.graph,
                        MatrixKind::CombinatorialLaplacian,
                        TRUNCATED_RANK_DEFAULT,
                    )
                    .eigenvalues
                }
            }
        })
    }

    pub fn netlsd(&self) -> &Result<NetlsdDescriptor, SpectrumError> {
        self.netlsd.get_or_init(|| netlsd_descriptor(&self.graph))
    }

    pub fn avg_clustering(&self) -> f64 {
        *self
            .avg_cc
            .get_or_init(|| self.graph.average_clustering())
    }

    /// Average path length (0 when no reachable pairs exist); exact up to
    /// [`APL_EXACT_LIMIT`] nodes, sampled-source beyond.
    pub fn avg_path_length(&self) -> f64 {
        *self.avg_pl.get_or_init(|| {
            let apl = if self.graph.node_count() <= APL_EXACT_LIMIT {
                self.graph.average_path_length()
            } else {
                self.graph.average_path_length_sampled(APL_SAMPLE_SOURCES)
            };
            apl.unwrap_or(0.0)
        })
    }

    pub fn path_length_sampled(&self) -> bool {
        self.graph.node_count() > APL_EXACT_LIMIT
    }
}

/// Evaluate a metric for the ordered pair (a, b). Pair metrics are
/// symmetric; `avg-cc` and `avg-pl` report the property of `b` (the
/// generated side in chain evaluation).
pub fn evaluate(metric: MetricId, a: &CachedGraph, b: &CachedGraph) -> Result<f64, MetricError> {
    match metric {
        MetricId::DegreeJs => Ok(degree_js(a.graph(), b.graph())),
        MetricId::PagerankJs => Ok(distribution::pagerank_js_from_scores(
            a.pagerank(),
            b.pagerank(),
        )),
        MetricId::Portrait => {
            for g in [a, b] {
                if g.graph().node_count() <= 1 || g.graph().edge_count() == 0 {
                    return Err(PortraitError::UndefinedPortrait.into());
                }
            }
            Ok(portrait::portrait_divergence_from(
                a.portrait(),
                b.portrait(),
            ))
        }
        MetricId::Lambda => Ok(lambda_distance_from(a.comb_spectrum(), b.comb_spectrum())),
        MetricId::RgfdL1 => Ok(graphlets::rgfd_from_vectors(
            a.graphlets(),
            b.graphlets(),
            RgfdNorm::L1,
        )),
        MetricId::RgfdL2 => Ok(graphlets::rgfd_from_vectors(
            a.graphlets(),
            b.graphlets(),
            RgfdNorm::L2,
        )),
        MetricId::Netlsd => {
            let d1 = a.netlsd().as_ref().map_err(|e| e.clone())?;
            let d2 = b.netlsd().as_ref().map_err(|e| e.clone())?;
            Ok(netlsd::netlsd_distance_from(d1, d2))
        }
        MetricId::AvgCc => Ok(b.avg_clustering()),
        MetricId::AvgPl => Ok(b.avg_path_length()),
    }
}
