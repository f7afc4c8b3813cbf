//! Laplacian spectra: dense symmetric eigensolves for small graphs and a
//! Lanczos-style truncated solve for graphs past the dense cutoff.

use crate::graph::Graph;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default node-count cutoff for the full dense eigensolve.
pub const DENSE_LIMIT_DEFAULT: usize = 3000;

/// Default number of top eigenvalues kept in truncated mode.
pub const TRUNCATED_RANK_DEFAULT: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    /// L = D - A
    CombinatorialLaplacian,
    /// L = I - D^{-1/2} A D^{-1/2}, with rows of isolated nodes zeroed
    NormalizedLaplacian,
}

/// Eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub matrix_kind: MatrixKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error(
        "graph has {nodes} nodes, over the dense eigensolve limit of {limit}; \
         use laplacian_spectrum_truncated for a top-r spectrum"
    )]
    TooLarge { nodes: usize, limit: usize },
}

/// All `n` Laplacian eigenvalues, sorted descending, computed by a dense
/// symmetric eigensolver. Errors when `n` exceeds [`DENSE_LIMIT_DEFAULT`].
pub fn laplacian_spectrum(g: &Graph, kind: MatrixKind) -> Result<SpectrumResult, SpectrumError> {
    laplacian_spectrum_with_limit(g, kind, DENSE_LIMIT_DEFAULT)
}

/// As [`laplacian_spectrum`] with an explicit dense cutoff.
pub fn laplacian_spectrum_with_limit(
    g: &Graph,
    kind: MatrixKind,
    dense_limit: usize,
) -> Result<SpectrumResult, SpectrumError> {
    let n = g.node_count();
    if n > dense_limit {
        return Err(SpectrumError::TooLarge {
            nodes: n,
            limit: dense_limit,
        });
    }
    if n == 0 {
        return Ok(SpectrumResult {
            eigenvalues: Vec::new(),
            matrix_kind: kind,
        });
    }
    let l = laplacian_matrix(g, kind);
    let mut eigenvalues: Vec<f64> = l.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(SpectrumResult {
        eigenvalues,
        matrix_kind: kind,
    })
}

/// Top-`rank` eigenvalues (sorted descending) by Lanczos iteration with full
/// reorthogonalization. Falls back to the dense path when `rank >= n`.
pub fn laplacian_spectrum_truncated(g: &Graph, kind: MatrixKind, rank: usize) -> SpectrumResult {
    let n = g.node_count();
    if n == 0 || rank == 0 {
        return SpectrumResult {
            eigenvalues: Vec::new(),
            matrix_kind: kind,
        };
    }
    if rank >= n && n <= DENSE_LIMIT_DEFAULT {
        return laplacian_spectrum_with_limit(g, kind, n).expect("within limit");
    }
    let steps = (2 * rank + 30).min(n);
    let inv_sqrt_deg: Vec<f64> = (0..n)
        .map(|v| {
            let d = g.degree(v);
            if d == 0 {
                0.0
            } else {
                1.0 / (d as f64).sqrt()
            }
        })
        .collect();
    let matvec = |x: &[f64], y: &mut [f64]| match kind {
        MatrixKind::CombinatorialLaplacian => {
            for v in 0..n {
                let mut acc = g.degree(v) as f64 * x[v];
                for &u in g.neighbors(v) {
                    acc -= x[u];
                }
                y[v] = acc;
            }
        }
        MatrixKind::NormalizedLaplacian => {
            for v in 0..n {
                if g.degree(v) == 0 {
                    y[v] = 0.0;
                    continue;
                }
                let mut acc = x[v];
                for &u in g.neighbors(v) {
                    acc -= inv_sqrt_deg[v] * inv_sqrt_deg[u] * x[u];
                }
                y[v] = acc;
            }
        }
    };

    // deterministic start vector from a fixed splitmix stream
    let mut q = vec![vec![0.0f64; n]];
    {
        let mut s = 0x9e3779b97f4a7c15u64;
        for x in q[0].iter_mut() {
            s = splitmix64(s);
            *x = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        }
        normalize(&mut q[0]);
    }
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut w = vec![0.0f64; n];
    for j in 0..steps {
        matvec(&q[j], &mut w);
        let a: f64 = dot(&w, &q[j]);
        alpha.push(a);
        for (wi, qi) in w.iter_mut().zip(q[j].iter()) {
            *wi -= a * qi;
        }
        if j > 0 {
            let b_prev = beta[j - 1];
            for (wi, qi) in w.iter_mut().zip(q[j - 1].iter()) {
                *wi -= b_prev * qi;
            }
        }
        // full reorthogonalization keeps the basis stable
        for qi in &q {
            let proj = dot(&w, qi);
            for (wi, x) in w.iter_mut().zip(qi.iter()) {
                *wi -= proj * x;
            }
        }
        let b = dot(&w, &w).sqrt();
        if j + 1 == steps || b < 1e-12 {
            break;
        }
        beta.push(b);
        let mut qn = w.clone();
        qn.iter_mut().for_each(|x| *x /= b);
        q.push(qn);
    }
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let mut eigenvalues: Vec<f64> = t.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    eigenvalues.truncate(rank);
    SpectrumResult {
        eigenvalues,
        matrix_kind: kind,
    }
}

/// Dense Laplacian matrix of the requested kind.
pub fn laplacian_matrix(g: &Graph, kind: MatrixKind) -> DMatrix<f64> {
    let n = g.node_count();
    let mut l = DMatrix::<f64>::zeros(n, n);
    match kind {
        MatrixKind::CombinatorialLaplacian => {
            for v in 0..n {
                l[(v, v)] = g.degree(v) as f64;
                for &u in g.neighbors(v) {
                    l[(v, u)] = -1.0;
                }
            }
        }
        MatrixKind::NormalizedLaplacian => {
            for v in 0..n {
                let dv = g.degree(v);
                if dv == 0 {
                    continue;
                }
                l[(v, v)] = 1.0;
                for &u in g.neighbors(v) {
                    let du = g.degree(u);
                    l[(v, u)] = -1.0 / ((dv as f64) * (du as f64)).sqrt();
                }
            }
        }
    }
    l
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} != {b} (tol {tol})");
    }

    #[test]
    fn complete_graph_spectrum() {
        // L of K_n has eigenvalue n with multiplicity n-1 and a single 0
        for n in [2usize, 4, 8] {
            let s = laplacian_spectrum(&Graph::complete(n), MatrixKind::CombinatorialLaplacian)
                .unwrap();
            assert_eq!(s.eigenvalues.len(), n);
            for &ev in &s.eigenvalues[..n - 1] {
                assert_close(ev, n as f64, 1e-9);
            }
            assert_close(s.eigenvalues[n - 1], 0.0, 1e-9);
        }
    }

    #[test]
    fn k2_spectra() {
        let comb =
            laplacian_spectrum(&Graph::complete(2), MatrixKind::CombinatorialLaplacian).unwrap();
        assert_close(comb.eigenvalues[0], 2.0, 1e-12);
        assert_close(comb.eigenvalues[1], 0.0, 1e-12);
        // bipartite graph: normalized Laplacian reaches eigenvalue 2
        let norm = laplacian_spectrum(&Graph::complete(2), MatrixKind::NormalizedLaplacian)
            .unwrap();
        assert_close(norm.eigenvalues[0], 2.0, 1e-12);
        assert_close(norm.eigenvalues[1], 0.0, 1e-12);
    }

    #[test]
    fn zero_multiplicity_counts_components() {
        let mut edges = Vec::new();
        edges.extend([(0, 1), (1, 2), (2, 0)]);
        edges.extend([(3, 4)]);
        let g = Graph::from_pairs(6, edges); // triangle + edge + isolate
        let s = laplacian_spectrum(&g, MatrixKind::CombinatorialLaplacian).unwrap();
        let zeros = s.eigenvalues.iter().filter(|x| x.abs() < 1e-8).count();
        assert_eq!(zeros, g.connected_components().count);
    }

    #[test]
    fn normalized_spectrum_bounded() {
        let g = Graph::from_pairs(7, vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 5)]);
        let s = laplacian_spectrum(&g, MatrixKind::NormalizedLaplacian).unwrap();
        for &ev in &s.eigenvalues {
            assert!((-1e-9..=2.0 + 1e-9).contains(&ev), "out of range: {ev}");
        }
    }

    #[test]
    fn residual_spot_check() {
        // eigenpair residual on a small graph via the dense decomposition
        let g = Graph::from_pairs(8, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6)]);
        let l = laplacian_matrix(&g, MatrixKind::CombinatorialLaplacian);
        let eig = nalgebra::SymmetricEigen::new(l.clone());
        let l_norm = l.norm();
        for i in 0..g.node_count() {
            let v: DVector<f64> = eig.eigenvectors.column(i).into();
            let residual = (&l * &v - eig.eigenvalues[i] * &v).norm();
            assert!(residual <= 1e-6 * l_norm.max(1.0));
        }
    }

    #[test]
    fn too_large_reports_truncated_mode() {
        let g = Graph::empty(10);
        let err = laplacian_spectrum_with_limit(&g, MatrixKind::CombinatorialLaplacian, 5)
            .unwrap_err();
        assert!(matches!(err, SpectrumError::TooLarge { nodes: 10, limit: 5 }));
    }

    #[test]
    fn truncated_matches_dense_top_eigenvalues() {
        let mut edges = Vec::new();
        for u in 0..30usize {
            for v in u + 1..30 {
                if (u * 31 + v * 17) % 5 == 0 {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_pairs(30, edges);
        let dense = laplacian_spectrum(&g, MatrixKind::CombinatorialLaplacian).unwrap();
        let trunc = laplacian_spectrum_truncated(&g, MatrixKind::CombinatorialLaplacian, 5);
        assert_eq!(trunc.eigenvalues.len(), 5);
        for (a, b) in dense.eigenvalues.iter().zip(trunc.eigenvalues.iter()) {
            assert_close(*a, *b, 1e-6);
        }
    }
}
