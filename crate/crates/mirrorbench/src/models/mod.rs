//! Fit-and-generate graph models: Erdos-Renyi, Chung-Lu, SBM, Kronecker,
//! and BTER. Each model exposes `fit(&Graph) -> params` and
//! `generate(&params, seed) -> Graph`; generation is a pure function of
//! (params, seed).

pub mod bter;
pub mod chung_lu;
pub mod community;
pub mod er;
pub mod kronecker;
pub mod sbm;

pub use bter::{fit_bter, generate_bter, BterParams};
pub use chung_lu::{fit_chung_lu, generate_chung_lu, ChungLuParams};
pub use community::detect_communities;
pub use er::{fit_er, generate_er, ErParams};
pub use kronecker::{fit_kronecker, generate_kronecker, Initiator, KroneckerParams};
pub use sbm::{fit_sbm, generate_sbm, SbmParams};

use crate::graph::Graph;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// 64-bit generation seed; identical (params, seed) always yields an
/// identical graph.
pub type RngSeed = u64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("fit failed: no optimizer restart produced a finite loss")]
    FitFailed,
    #[error("generation degenerate: produced {nodes} nodes and {edges} edges")]
    GenerationDegenerate { nodes: usize, edges: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// The five supported model kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Er,
    ChungLu,
    Sbm,
    Kronecker,
    Bter,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Er,
        ModelKind::ChungLu,
        ModelKind::Sbm,
        ModelKind::Kronecker,
        ModelKind::Bter,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Er => "er",
            ModelKind::ChungLu => "chung-lu",
            ModelKind::Sbm => "sbm",
            ModelKind::Kronecker => "kron",
            ModelKind::Bter => "bter",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown model '{0}' (expected er|chung-lu|sbm|kron|bter)")]
pub struct UnknownModel(pub String);

impl FromStr for ModelKind {
    type Err = UnknownModel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "er" => Ok(ModelKind::Er),
            "chung-lu" | "chung_lu" => Ok(ModelKind::ChungLu),
            "sbm" => Ok(ModelKind::Sbm),
            "kron" | "kronecker" => Ok(ModelKind::Kronecker),
            "bter" => Ok(ModelKind::Bter),
            other => Err(UnknownModel(other.to_string())),
        }
    }
}

/// Fitted parameters for one model. The JSON layout is stable: a "model"
/// tag plus the per-model fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum ModelParams {
    #[serde(rename = "er")]
    Er(ErParams),
    #[serde(rename = "chung-lu")]
    ChungLu(ChungLuParams),
    #[serde(rename = "sbm")]
    Sbm(SbmParams),
    #[serde(rename = "kronecker")]
    Kronecker(KroneckerParams),
    #[serde(rename = "bter")]
    Bter(BterParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Er(_) => ModelKind::Er,
            ModelParams::ChungLu(_) => ModelKind::ChungLu,
            ModelParams::Sbm(_) => ModelKind::Sbm,
            ModelParams::Kronecker(_) => ModelKind::Kronecker,
            ModelParams::Bter(_) => ModelKind::Bter,
        }
    }

    /// Check the structural invariants of the parameter set; parsed
    /// documents go through this before generation.
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            ModelParams::Er(p) => p.validate(),
            ModelParams::ChungLu(p) => p.validate(),
            ModelParams::Sbm(p) => p.validate(),
            ModelParams::Kronecker(p) => p.validate(),
            ModelParams::Bter(p) => p.validate(),
        }
    }
}

/// Fit the requested model to `g`.
pub fn fit(kind: ModelKind, g: &Graph) -> Result<ModelParams, ModelError> {
    Ok(match kind {
        ModelKind::Er => ModelParams::Er(fit_er(g)?),
        ModelKind::ChungLu => ModelParams::ChungLu(fit_chung_lu(g)?),
        ModelKind::Sbm => ModelParams::Sbm(fit_sbm(g)?),
        ModelKind::Kronecker => ModelParams::Kronecker(fit_kronecker(g)?),
        ModelKind::Bter => ModelParams::Bter(fit_bter(g)?),
    })
}

/// Generate a graph without the chain-stopping degeneracy check.
pub fn generate_unchecked(params: &ModelParams, seed: RngSeed) -> Graph {
    match params {
        ModelParams::Er(p) => generate_er(p, seed),
        ModelParams::ChungLu(p) => generate_chung_lu(p, seed),
        ModelParams::Sbm(p) => generate_sbm(p, seed),
        ModelParams::Kronecker(p) => generate_kronecker(p, seed),
        ModelParams::Bter(p) => generate_bter(p, seed),
    }
}

/// Generate a graph; errors with [`ModelError::GenerationDegenerate`] when
/// the output has no edges or fewer than 4 nodes, the chain-stopping signal.
pub fn generate(params: &ModelParams, seed: RngSeed) -> Result<Graph, ModelError> {
    let g = generate_unchecked(params, seed);
    if g.edge_count() == 0 || g.node_count() < 4 {
        return Err(ModelError::GenerationDegenerate {
            nodes: g.node_count(),
            edges: g.edge_count(),
        });
    }
    Ok(g)
}

/// Stable seed derivation for nested deterministic streams
/// (master -> trial -> iteration).
pub fn derive_seed(parent: u64, stream: u64) -> u64 {
    splitmix64(parent ^ splitmix64(stream.wrapping_add(0x9e3779b97f4a7c15)))
}

pub(crate) fn seeded_rng(seed: RngSeed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
