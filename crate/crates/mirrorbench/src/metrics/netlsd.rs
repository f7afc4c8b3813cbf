//! Heat-trace spectral descriptor: h(t) = sum_i exp(-t * lambda_i) over the
//! normalized-Laplacian eigenvalues, sampled at 250 logarithmically spaced
//! timescales in [1e-2, 1e2].

use crate::graph::Graph;
use crate::spectral::{laplacian_spectrum, MatrixKind, SpectrumError};

/// Number of timescale samples.
pub const NETLSD_DIMENSIONS: usize = 250;

#[derive(Debug, Clone, PartialEq)]
pub struct NetlsdDescriptor {
    pub heat_trace: Vec<f64>,
}

/// The fixed timescale grid.
pub fn netlsd_timescales() -> Vec<f64> {
    (0..NETLSD_DIMENSIONS)
        .map(|j| 10f64.powf(-2.0 + 4.0 * j as f64 / (NETLSD_DIMENSIONS - 1) as f64))
        .collect()
}

/// Heat-trace descriptor of `g`. Requires the full normalized-Laplacian
/// spectrum, so the dense eigensolve size limit applies.
pub fn netlsd_descriptor(g: &Graph) -> Result<NetlsdDescriptor, SpectrumError> {
    let spectrum = laplacian_spectrum(g, MatrixKind::NormalizedLaplacian)?;
    let heat_trace = netlsd_timescales()
        .iter()
        .map(|&t| {
            spectrum
                .eigenvalues
                .iter()
                .map(|&ev| (-t * ev.max(0.0)).exp())
                .sum()
        })
        .collect();
    Ok(NetlsdDescriptor { heat_trace })
}

/// Euclidean distance between the heat traces of two graphs.
pub fn netlsd_distance(g1: &Graph, g2: &Graph) -> Result<f64, SpectrumError> {
    Ok(netlsd_distance_from(
        &netlsd_descriptor(g1)?,
        &netlsd_descriptor(g2)?,
    ))
}

pub fn netlsd_distance_from(d1: &NetlsdDescriptor, d2: &NetlsdDescriptor) -> f64 {
    d1.heat_trace
        .iter()
        .zip(d2.heat_trace.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
