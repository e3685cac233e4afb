//! Dense verification oracle.
//!
//! The walk operator is not symmetric, but conjugating by the square root of
//! its reversing measure makes it so: with `D = diag(w)` the matrix
//! `D^{1/2} (I - P) D^{-1/2}` is symmetric tridiagonal, which certifies a
//! real simple spectrum structurally and hands back orthogonal eigenvectors.
//! Everything here is dense and meant for modest levels only; the rest of
//! the crate never materializes a matrix.

use nalgebra::DMatrix;

use crate::{grid::VertexGrid, laplacian::TransitionProfile};

/// Dense eigendecomposition of a level-n Laplacian.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub level: usize,
    /// Eigenvalues sorted increasingly; all real and inside `[0, 2]`.
    pub spectrum: Vec<f64>,
    /// Eigenvectors of the (non-symmetric) Laplacian, aligned with `spectrum`.
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Full spectrum and eigenvectors of the level-n Laplacian on `grid`.
pub fn dense_eigendecomposition(grid: &VertexGrid) -> OracleResult {
    let n = grid.vertex_count();
    let w = TransitionProfile::stationary_weights(grid);
    let profile = TransitionProfile::build(grid);
    let sqrt_w: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = 1.0;
        if k + 1 < n {
            // w[k] * P(k -> k+1) = w[k+1] * P(k+1 -> k) by reversibility
            let off = -profile.right()[k] * sqrt_w[k] / sqrt_w[k + 1];
            m[(k, k + 1)] = off;
            m[(k + 1, k)] = off;
        }
    }
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let col = eig.eigenvectors.column(i);
            // undo the symmetrizing conjugation
            (0..n).map(|k| col[k] / sqrt_w[k]).collect()
        })
        .collect();
    OracleResult {
        level: grid.level(),
        spectrum,
        eigenvectors,
    }
}

/// The lowest `count` eigenpairs rescaled so each eigenfunction equals one
/// at the left endpoint.
///
/// That is the normalization under which branch extension operates (boundary
/// values are fixed at the coarsest level and never rescaled), so impulse
/// weights computed against such a basis line up with the refined ones. Used
/// to serve `p = 1/2`, where branch extension itself is unavailable.
pub fn impulse_basis(grid: &VertexGrid, count: usize) -> Vec<crate::Eigenfunction> {
    let dense = dense_eigendecomposition(grid);
    (0..count)
        .map(|k| {
            let v0 = dense.eigenvectors[k][0];
            assert!(
                v0.abs() > 1e-12,
                "eigenvector {k} vanishes at the impulse site"
            );
            let values: Vec<f64> = dense.eigenvectors[k].iter().map(|v| v / v0).collect();
            crate::Eigenfunction::from_values(grid.level(), k, dense.spectrum[k], values)
        })
        .collect()
}

/// Largest elementwise gap between two sorted spectra.
pub fn max_spectrum_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra have different sizes");
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Rescales `vec` so that it matches `reference` at the entry where
/// `reference` is largest in magnitude. Eigenvectors are only defined up to
/// scale; this pins one down for comparison.
pub fn align_to(reference: &[f64], vec: &[f64]) -> Vec<f64> {
    assert_eq!(reference.len(), vec.len());
    let imax = reference
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap();
    let scale = reference[imax] / vec[imax];
    vec.iter().map(|v| v * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimation::EigenvalueTree;
    use crate::params::FractalParams;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn level_zero_spectrum() {
        let params = FractalParams::new(0.3).unwrap();
        let grid = VertexGrid::build(&params, 0).unwrap();
        let dense = dense_eigendecomposition(&grid);
        assert_relative_eq!(dense.spectrum[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(dense.spectrum[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn half_p_matches_discrete_cosines() {
        let params = FractalParams::new(0.5).unwrap();
        let grid = VertexGrid::build(&params, 2).unwrap();
        let dense = dense_eigendecomposition(&grid);
        for (k, lam) in dense.spectrum.iter().enumerate() {
            let want = 1.0 - (k as f64 * PI / 9.0).cos();
            assert!((lam - want).abs() < 1e-12);
        }
        // eigenvector for k=1 is cos(pi x) sampled uniformly, up to scale
        let reference: Vec<f64> = (0..=9).map(|j| (j as f64 * PI / 9.0).cos()).collect();
        let aligned = align_to(&reference, &dense.eigenvectors[1]);
        for (a, b) in reference.iter().zip(&aligned) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_spectrum_agrees_with_decimation() {
        for p in [0.2, 0.35, 0.5, 0.8] {
            let params = FractalParams::new(p).unwrap();
            let tree = EigenvalueTree::build(&params, 4).unwrap();
            for n in 1..=4 {
                let grid = VertexGrid::build(&params, n).unwrap();
                let dense = dense_eigendecomposition(&grid);
                let gap = max_spectrum_gap(&tree.values(n), &dense.spectrum);
                assert!(gap < 1e-8, "p={p} n={n}: gap {gap}");
            }
        }
    }

    #[test]
    fn residuals_of_dense_eigenvectors() {
        let params = FractalParams::new(0.8).unwrap();
        let grid = VertexGrid::build(&params, 3).unwrap();
        let profile = TransitionProfile::build(&grid);
        let dense = dense_eigendecomposition(&grid);
        for (lam, vec) in dense.spectrum.iter().zip(&dense.eigenvectors) {
            let image = profile.apply(vec).unwrap();
            let r = image
                .iter()
                .zip(vec)
                .fold(0.0f64, |m, (a, v)| m.max((a - lam * v).abs()));
            assert!(r < 1e-11, "residual {r} at lambda={lam}");
        }
    }
}
