//! Spectral decomposition of the discrete unit impulse at the left endpoint.
//!
//! On every level the impulse `(1, 0, ..., 0)` expands in the eigenbasis with
//! nonnegative weights that sum to one. The weights refine level by level:
//! the weight of a parent eigenvalue splits across its two or three children
//! so that the coarse expansion is reproduced on the old vertices and the new
//! vertices receive zero. For a three-child parent the split has a closed
//! form driven only by the child eigenvalues; for the endpoint parents 0 and
//! 2 the parent eigenfunction is the constant (respectively the alternating)
//! function, the matching collapses to a single equation, and a 2x2 system
//! remains.

use crate::{
    decimation::EigenvalueTree,
    eigenfunctions::{build_basis, Eigenfunction},
    grid::VertexGrid,
    laplacian::TransitionProfile,
    params::FractalParams,
    Error, Result,
};

/// Impulse expansion weights at one level, ranked like the spectrum.
#[derive(Debug, Clone)]
pub struct DeltaWeights {
    pub level: usize,
    pub alpha: Vec<f64>,
}

impl DeltaWeights {
    /// Level-0 weights: one half on the constant, one half on the
    /// alternating eigenfunction.
    pub fn initial() -> Self {
        Self {
            level: 0,
            alpha: vec![0.5, 0.5],
        }
    }

    /// Splits every weight across the children one level down.
    pub fn refine(&self, tree: &EigenvalueTree) -> Result<DeltaWeights> {
        let n = self.level;
        if tree.depth() < n + 1 || tree.level(n).len() != self.alpha.len() {
            return Err(Error::BasisMismatch(format!(
                "weights at level {n} need tree levels {n} and {}",
                n + 1
            )));
        }
        let params = tree.params();
        let parents = tree.level(n);
        let child_level = tree.level(n + 1);
        let mut children_of: Vec<Vec<usize>> = vec![Vec::with_capacity(3); parents.len()];
        for node in child_level {
            children_of[node.parent_k.expect("non-root node")].push(node.k_index);
        }
        let mut alpha = vec![0.0; child_level.len()];
        for (k, parent) in parents.iter().enumerate() {
            let kids = &children_of[k];
            let lams: Vec<f64> = kids.iter().map(|&j| child_level[j].value).collect();
            let split = match kids.len() {
                3 => split_three(params, self.alpha[k], &lams),
                2 => split_two(params, parent.value, self.alpha[k], &lams),
                other => panic!("a parent has {other} children"),
            };
            for (&j, a) in kids.iter().zip(split) {
                alpha[j] = a;
            }
        }
        Ok(DeltaWeights {
            level: n + 1,
            alpha,
        })
    }

    /// Weights at level `n`, refined down from level 0.
    pub fn at_level(tree: &EigenvalueTree, n: usize) -> Result<DeltaWeights> {
        let mut w = DeltaWeights::initial();
        for _ in 0..n {
            w = w.refine(tree)?;
        }
        Ok(w)
    }

    /// Expansion coefficients of the impulse over an explicit eigenbasis,
    /// computed by projection in the reversing-measure inner product. Works
    /// for any parameter, including `p = 1/2` with a dense-oracle basis.
    pub fn from_spectral_projection(grid: &VertexGrid, basis: &[Eigenfunction]) -> DeltaWeights {
        let w = TransitionProfile::stationary_weights(grid);
        let alpha = basis
            .iter()
            .map(|f| {
                let norm2: f64 = f.values.iter().zip(&w).map(|(v, wx)| wx * v * v).sum();
                w[0] * f.values[0] / norm2
            })
            .collect();
        DeltaWeights {
            level: grid.level(),
            alpha,
        }
    }

    pub fn mass(&self) -> f64 {
        self.alpha.iter().sum()
    }
}

/// Closed-form split for a parent with children `l1 < l2 < l3`. The common
/// denominator `3 l3^2 - 6 l3 + 2 + pq` equals `pq R'(l3)`, which is strictly
/// positive on the interior of the highest branch.
fn split_three(params: &FractalParams, alpha: f64, lams: &[f64]) -> Vec<f64> {
    let (l1, l2, l3) = (lams[0], lams[1], lams[2]);
    let p = params.p;
    let q = params.q;
    let denom = 3.0 * l3 * l3 - 6.0 * l3 + 2.0 + params.pq();
    assert!(denom > 0.0, "degenerate split denominator");
    assert!(l2 - l1 > 1e-12, "children must be separated");
    let a1 = alpha * (l3 - l2) * (q - l1) * (1.0 + p - l1) / ((l2 - l1) * denom);
    let a2 = alpha * (l1 - l3) * (q - l2) * (1.0 + p - l2) / ((l2 - l1) * denom);
    let a3 = alpha * (1.0 + p - l3) * (q - l3) / denom;
    vec![a1, a2, a3]
}

/// Split for the endpoint parents. Their eigenfunctions take equal
/// (eigenvalue 0) or opposite (eigenvalue 2) values on the two ends of every
/// cell, so the conditions at both new vertices collapse to the same linear
/// equation; together with mass conservation that determines the two child
/// weights. The second vertex's equation is still evaluated as a guard.
fn split_two(params: &FractalParams, parent: f64, alpha: f64, lams: &[f64]) -> Vec<f64> {
    let p = params.p;
    let q = params.q;
    let sign = if parent == 0.0 { 1.0 } else { -1.0 };
    debug_assert!(parent == 0.0 || parent == 2.0);
    let coeff = |z: f64| {
        let denom = (1.0 - p - z) * (1.0 + p - z);
        (q * (1.0 - z) + sign * p * q) / denom
    };
    let c1 = coeff(lams[0]);
    let c2 = coeff(lams[1]);
    // [1, 1; c1, c2] [a1, a2]^T = [alpha, 0]^T
    let det = c2 - c1;
    assert!(det.abs() > 1e-12, "endpoint split is singular");
    let a1 = alpha * c2 / det;
    let a2 = -alpha * c1 / det;
    // matching at the second new vertex of each cell reduces to the same
    // equation by the parents' sign structure; keep it as a cross-check
    let residual = a1 * c1 + a2 * c2;
    assert!(
        residual.abs() <= 1e-10 * alpha.abs().max(1e-300),
        "endpoint split failed its consistency check: {residual}"
    );
    vec![a1, a2]
}

/// The truncated impulse approximation on the level-`n` grid: level-`n0`
/// weights paired with the tracked eigenfunctions `f_{n,k}`, `k <= 3^n0`.
pub fn approximate_delta(params: &FractalParams, n0: usize, n: usize) -> Result<Vec<f64>> {
    let tree = EigenvalueTree::build(params, n0)?;
    let weights = DeltaWeights::at_level(&tree, n0)?;
    let basis = build_basis(params, n0, n)?;
    Ok(weighted_sum(&weights.alpha, &basis))
}

/// `sum_k alpha_k f_k` over a basis of equal-level eigenfunctions.
pub fn weighted_sum(alpha: &[f64], basis: &[Eigenfunction]) -> Vec<f64> {
    assert_eq!(alpha.len(), basis.len());
    let n = basis[0].values.len();
    let mut out = vec![0.0; n];
    for (a, f) in alpha.iter().zip(basis) {
        for (o, v) in out.iter_mut().zip(&f.values) {
            *o += a * v;
        }
    }
    out
}

/// Max-norm distance of `values` from the discrete impulse `(1, 0, ..., 0)`.
pub fn impulse_distance(values: &[f64]) -> f64 {
    values.iter().enumerate().fold(0.0f64, |m, (i, v)| {
        let want = if i == 0 { 1.0 } else { 0.0 };
        m.max((v - want).abs())
    })
}
