//! mirrorbench stress-tests graph generative models by repeatedly fitting
//! each model to its own generated output and tracking how far the chain of
//! graphs drifts from the source, measured with a battery of structural
//! comparison metrics.
//!
//! The pieces:
//! - [`graph`]: undirected simple graphs and structural primitives
//! - [`spectral`]: Laplacian spectra (dense and truncated)
//! - [`models`]: fit/generate for ER, Chung-Lu, SBM, Kronecker, and BTER
//! - [`metrics`]: degree/PageRank JS, portrait divergence, lambda distance,
//!   graphlet counting with RGFD, heat-trace descriptors, and 2-D PCA
//! - [`harness`]: chain orchestration, truncation, and aggregation
//! - [`synth`], [`io`]: reference synthetic graphs and the file formats

#![forbid(unsafe_code)]

pub mod graph;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod models;
pub mod spectral;
pub mod synth;

pub use graph::Graph;
pub use harness::{aggregate, run_chain, run_trials, ChainConfig, ChainRecord};
pub use metrics::{CachedGraph, MetricId};
pub use models::{fit, generate, ModelKind, ModelParams};
