//! Two-component PCA used to project graphlet-frequency vectors for
//! plotting.

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct Pca2d {
    /// (x, y) projection of each input vector, in input order.
    pub coords: Vec<(f64, f64)>,
    /// The two principal-axis weight vectors.
    pub weights: [Vec<f64>; 2],
    /// Set when the input has zero variance; all coordinates are 0.
    pub degenerate: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcaError {
    #[error("PCA needs at least 2 vectors, got {0}")]
    TooFewVectors(usize),
    #[error("PCA needs dimension >= 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("input vectors have inconsistent lengths")]
    RaggedInput,
}

/// Mean-center, eigendecompose the sample covariance, and project onto the
/// top two components. Component sign is fixed by making the
/// largest-magnitude weight positive.
pub fn pca_2d(vectors: &[Vec<f64>]) -> Result<Pca2d, PcaError> {
    let count = vectors.len();
    if count < 2 {
        return Err(PcaError::TooFewVectors(count));
    }
    let dim = vectors[0].len();
    if dim < 2 {
        return Err(PcaError::DimensionTooSmall(dim));
    }
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(PcaError::RaggedInput);
    }

    let mut mean = vec![0.0; dim];
    for v in vectors {
        for (m, x) in mean.iter_mut().zip(v.iter()) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= count as f64);

    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for v in vectors {
        for i in 0..dim {
            let di = v[i] - mean[i];
            for j in i..dim {
                let dj = v[j] - mean[j];
                cov[(i, j)] += di * dj;
            }
        }
    }
    let denom = (count - 1) as f64;
    for i in 0..dim {
        for j in i..dim {
            cov[(i, j)] /= denom;
            cov[(j, i)] = cov[(i, j)];
        }
    }

    let trace: f64 = (0..dim).map(|i| cov[(i, i)]).sum();
    if trace <= 1e-30 {
        return Ok(Pca2d {
            coords: vec![(0.0, 0.0); count],
            weights: [vec![0.0; dim], vec![0.0; dim]],
            degenerate: true,
        });
    }

    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut weights: [Vec<f64>; 2] = [vec![0.0; dim], vec![0.0; dim]];
    for (c, w) in weights.iter_mut().enumerate() {
        let col = eig.eigenvectors.column(order[c]);
        let mut best = 0usize;
        for i in 1..dim {
            if col[i].abs() > col[best].abs() {
                best = i;
            }
        }
        let sign = if col[best] < 0.0 { -1.0 } else { 1.0 };
        for (wi, x) in w.iter_mut().zip(col.iter()) {
            *wi = sign * x;
        }
    }

    let coords = vectors
        .iter()
        .map(|v| {
            let mut x = 0.0;
            let mut y = 0.0;
            for i in 0..dim {
                let centered = v[i] - mean[i];
                x += centered * weights[0][i];
                y += centered * weights[1][i];
            }
            (x, y)
        })
        .collect();

    Ok(Pca2d {
        coords,
        weights,
        degenerate: false,
    })
}
