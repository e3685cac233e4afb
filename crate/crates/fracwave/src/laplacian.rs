//! Transition profiles, the discrete Laplacian, and the energy form.

use crate::{grid::VertexGrid, Result};

/// Nearest-neighbour jump probabilities at every vertex of a level-n grid.
///
/// `left[k] + right[k] = 1` everywhere. At an interior vertex the probability
/// toward a neighbour is proportional to the measure of the cell crossed on
/// the way, which always reduces to `p` or `q`; the computed ratio is snapped
/// to whichever of the two it matches. The endpoints send all mass inward.
#[derive(Debug, Clone)]
pub struct TransitionProfile {
    level: usize,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl TransitionProfile {
    pub fn build(grid: &VertexGrid) -> Self {
        let params = grid.params();
        let n = grid.vertex_count();
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        left[0] = 0.0;
        right[0] = 1.0;
        left[n - 1] = 1.0;
        right[n - 1] = 0.0;
        let cm = grid.cell_measure();
        for k in 1..n - 1 {
            let toward_left = cm[k - 1] / (cm[k - 1] + cm[k]);
            // the measure-proportional ratio is exactly p or q up to rounding;
            // snap the pair so both sides carry the exact parameters
            let (l, r) = if (toward_left - params.p).abs() < (toward_left - params.q).abs() {
                (params.p, params.q)
            } else {
                (params.q, params.p)
            };
            debug_assert!(
                (toward_left - l).abs() < 1e-12,
                "measure ratio {toward_left} is neither p nor q"
            );
            left[k] = l;
            right[k] = r;
        }
        Self {
            level: grid.level(),
            left,
            right,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len()
    }

    /// Probability of jumping to the left neighbour.
    pub fn left(&self) -> &[f64] {
        &self.left
    }

    /// Probability of jumping to the right neighbour.
    pub fn right(&self) -> &[f64] {
        &self.right
    }

    /// Applies the Laplacian `(I - P) f` through its tridiagonal action.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.left.len() {
            return Err(crate::Error::DimensionMismatch {
                level: self.level,
                want: self.left.len(),
                got: f.len(),
            });
        }
        let n = f.len();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let lft = if k > 0 { self.left[k] * f[k - 1] } else { 0.0 };
            let rgt = if k + 1 < n {
                self.right[k] * f[k + 1]
            } else {
                0.0
            };
            out[k] = f[k] - lft - rgt;
        }
        Ok(out)
    }

    /// Unnormalized reversing weights of the walk: `w(x) P(x -> y) = w(y) P(y -> x)`.
    ///
    /// Interior vertices weigh the two adjacent cell measures, endpoints the
    /// single adjacent one. Normalized, this is the discrete stand-in for the
    /// self-similar measure and the inner product in which the walk operator
    /// is self-adjoint.
    pub fn stationary_weights(grid: &VertexGrid) -> Vec<f64> {
        let cm = grid.cell_measure();
        let n = grid.vertex_count();
        let mut w = vec![0.0; n];
        w[0] = cm[0];
        w[n - 1] = cm[n - 2];
        for k in 1..n - 1 {
            w[k] = cm[k - 1] + cm[k];
        }
        let total: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= total;
        }
        w
    }
}

/// The level-n energy of a vertex function: per-cell squared increments
/// weighted by inverse cell resistance. Zero exactly on constants.
pub fn energy(grid: &VertexGrid, f: &[f64]) -> Result<f64> {
    grid.check_len(f)?;
    let mut e = 0.0;
    for (i, r) in grid.cell_resistance().iter().enumerate() {
        let d = f[i + 1] - f[i];
        e += d * d / r;
    }
    Ok(e)
}
