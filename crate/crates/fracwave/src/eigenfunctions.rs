//! Eigenfunction extension across levels and the sup-norm estimates.
//!
//! An eigenfunction on the level-n grid extends to level n+1 by filling the
//! two new vertices of every cell from its endpoints:
//!
//! ```text
//! f(y0) = [q (1-z) f(x0) + pq f(x1)] / [(1-p-z)(1+p-z)]
//! f(y1) = [q (1-z) f(x1) + pq f(x0)] / [(1-p-z)(1+p-z)]
//! ```
//!
//! where `z` is any admissible preimage of the current eigenvalue under the
//! cubic. The coarse values are never touched. With `z = 0` this is exactly
//! the harmonic (resistance-linear) extension. The denominator vanishes at
//! the poles `1 ± p`, so extension is refused near them and at `p = 1/2`,
//! where the poles sit inside the spectrum itself.

use crate::{
    decimation::{cubic, tracking_step, EigenvalueTree},
    params::FractalParams,
    vertex_count, Error, Result,
};

/// Distance to the poles `1 ± p` below which the extension denominator loses
/// too many digits to be trusted.
pub const EXTENSION_GUARD: f64 = 1e-9;

/// A discrete eigenfunction: values on the level-n grid together with its
/// eigenvalue and rank.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub level: usize,
    /// Rank of the eigenvalue in increasing order at this level.
    pub k_index: usize,
    pub eigenvalue: f64,
    pub values: Vec<f64>,
    /// Cached max |value|.
    pub sup_norm: f64,
}

impl Eigenfunction {
    /// Wraps explicit values, caching their sup norm.
    pub fn from_values(level: usize, k_index: usize, eigenvalue: f64, values: Vec<f64>) -> Self {
        Self::new(level, k_index, eigenvalue, values)
    }

    fn new(level: usize, k_index: usize, eigenvalue: f64, values: Vec<f64>) -> Self {
        let sup_norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Self {
            level,
            k_index,
            eigenvalue,
            values,
            sup_norm,
        }
    }

    /// Max-norm eigen-residual `max |Laplacian f - lambda f|`.
    pub fn residual(&self, profile: &crate::laplacian::TransitionProfile) -> Result<f64> {
        let image = profile.apply(&self.values)?;
        Ok(image
            .iter()
            .zip(&self.values)
            .fold(0.0f64, |m, (a, v)| m.max((a - self.eigenvalue * v).abs())))
    }
}

/// The two level-0 eigenfunctions: the constant `(1, 1)` with eigenvalue 0
/// and the alternating `(1, -1)` with eigenvalue 2. Boundary values are kept
/// at this scale throughout all extensions.
pub fn level0_basis() -> (Eigenfunction, Eigenfunction) {
    (
        Eigenfunction::new(0, 0, 0.0, vec![1.0, 1.0]),
        Eigenfunction::new(0, 1, 2.0, vec![1.0, -1.0]),
    )
}

/// Extends `f` one level with the new eigenvalue `z`, which must be a
/// preimage of `f.eigenvalue` and stay clear of the poles. The rank is
/// carried over; callers re-rank when they extend along several branches.
pub fn extend(params: &FractalParams, f: &Eigenfunction, z: f64) -> Result<Eigenfunction> {
    if params.p == 0.5 {
        return Err(Error::ExtensionAtHalf);
    }
    let mapped = cubic(params, z);
    if (mapped - f.eigenvalue).abs() > 1e-10 * f.eigenvalue.abs().max(1.0) {
        return Err(Error::EigenvalueMismatch {
            z,
            parent: f.eigenvalue,
            mapped,
        });
    }
    for pole in [1.0 - params.p, 1.0 + params.p] {
        if (z - pole).abs() < EXTENSION_GUARD {
            return Err(Error::ForbiddenEigenvalue { z, pole });
        }
    }
    let p = params.p;
    let q = params.q;
    let denom = (1.0 - p - z) * (1.0 + p - z);
    let a = q * (1.0 - z) / denom;
    let b = p * q / denom;
    let values = fill_cells(&f.values, a, b);
    Ok(Eigenfunction::new(f.level + 1, f.k_index, z, values))
}

/// Harmonic (resistance-linear) extension of a vertex function one level.
pub fn harmonic_extend(params: &FractalParams, f: &[f64]) -> Vec<f64> {
    let a = 1.0 / (1.0 + params.p);
    let b = params.p / (1.0 + params.p);
    fill_cells(f, a, b)
}

/// Interleaves `y0 = a x0 + b x1`, `y1 = a x1 + b x0` into every cell.
fn fill_cells(f: &[f64], a: f64, b: f64) -> Vec<f64> {
    let cells = f.len() - 1;
    let mut out = Vec::with_capacity(3 * cells + 1);
    for i in 0..cells {
        let x0 = f[i];
        let x1 = f[i + 1];
        out.push(x0);
        out.push(a * x0 + b * x1);
        out.push(a * x1 + b * x0);
    }
    out.push(f[cells]);
    out
}

/// The truncated eigenbasis `f_{n,k}` for `0 <= k <= 3^n0` at level `n >= n0`.
///
/// Up to level `n0` the full basis is grown over every admissible branch,
/// re-ranked by eigenvalue after each level so that ranks agree with the
/// eigenvalue tree. From `n0` on, each member follows its tracking path
/// (smallest admissible preimage), which keeps rank `k` pointing at the k-th
/// smallest eigenvalue of every finer level.
pub fn build_basis(params: &FractalParams, n0: usize, n: usize) -> Result<Vec<Eigenfunction>> {
    if params.p == 0.5 {
        return Err(Error::ExtensionAtHalf);
    }
    assert!(
        n >= n0,
        "resolution level must not be below the truncation level"
    );
    let tree = EigenvalueTree::build(params, n0)?;
    let (f0, f1) = level0_basis();
    let mut funcs = vec![f0, f1];
    for m in 0..n0 {
        let mut next = Vec::with_capacity(vertex_count(m + 1));
        for node in tree.level(m + 1) {
            let parent = &funcs[node.parent_k.expect("non-root node")];
            let mut child = extend(params, parent, node.value)?;
            child.k_index = node.k_index;
            next.push(child);
        }
        funcs = next;
    }
    for _ in n0..n {
        for f in funcs.iter_mut() {
            let z = tracking_step(params, f.eigenvalue)?;
            *f = extend(params, f, z)?;
        }
    }
    Ok(funcs)
}

/// Upper bound for the sup norm of the limit eigenfunction reached from `f`
/// by tracking extensions:
/// `|f| * exp( lambda_n / (q - lambda_{n+1}) * p / (2 - p) )`.
///
/// Requires `p < 1/2` and a next-level eigenvalue below `q`; rather than
/// clamping a broken denominator the bound is refused.
pub fn sup_norm_bound(params: &FractalParams, f: &Eigenfunction) -> Result<f64> {
    if params.p >= 0.5 {
        return Err(Error::BoundRequiresSmallP(params.p));
    }
    let next = tracking_step(params, f.eigenvalue)?;
    if next >= params.q {
        return Err(Error::BoundDenominator { next, q: params.q });
    }
    let rate = f.eigenvalue / (params.q - next) * params.p / (2.0 - params.p);
    Ok(f.sup_norm * rate.exp())
}

/// Upper bound for the sup distance between `f` and its limit eigenfunction,
/// given the limit eigenvalue `lambda_k`:
/// `c0^{-n} * lambda_k * |f| * |g| * exp(...)` with the Green's kernel bound
/// `|g| = 1/4` and the same exponential as [`sup_norm_bound`].
pub fn convergence_bound(params: &FractalParams, f: &Eigenfunction, lambda_k: f64) -> Result<f64> {
    if params.p >= 0.5 {
        return Err(Error::BoundRequiresSmallP(params.p));
    }
    let next = tracking_step(params, f.eigenvalue)?;
    if next >= params.q {
        return Err(Error::BoundDenominator { next, q: params.q });
    }
    let green_sup = 0.25;
    let rate = f.eigenvalue / (params.q - next) * params.p / (2.0 - params.p);
    Ok(params.c0.powi(-(f.level as i32)) * lambda_k * f.sup_norm * green_sup * rate.exp())
}

/// A finite-level stand-in for a limit eigenfunction: the level-n values
/// plus a certified sup-distance to the limit.
///
/// Between vertices the function is read through harmonic (resistance-linear)
/// interpolation, the same rule that fills finer grids.
#[derive(Debug, Clone)]
pub struct LimitEigenfunctionApprox {
    pub base: Eigenfunction,
    /// Upper bound for the sup distance to the limit eigenfunction.
    pub error_bound: f64,
}

impl LimitEigenfunctionApprox {
    /// Wraps `base` with the error bound computed from the limit eigenvalue.
    pub fn new(params: &FractalParams, base: Eigenfunction, lambda_k: f64) -> Result<Self> {
        let error_bound = convergence_bound(params, &base, lambda_k)?;
        Ok(Self { base, error_bound })
    }

    /// Values on the level-`target` grid, filled harmonically.
    pub fn harmonic_fill(&self, params: &FractalParams, target: usize) -> Vec<f64> {
        assert!(target >= self.base.level);
        let mut values = self.base.values.clone();
        for _ in self.base.level..target {
            values = harmonic_extend(params, &values);
        }
        values
    }

    /// Value at an arbitrary point of the interval, interpolated linearly in
    /// the resistance coordinate of the base grid.
    pub fn evaluate(&self, grid: &crate::grid::VertexGrid, x: f64) -> f64 {
        assert_eq!(grid.level(), self.base.level, "grid level mismatch");
        assert!((0.0..=1.0).contains(&x));
        let coords = grid.coords_resistance();
        let i = coords.partition_point(|&c| c <= x).min(coords.len() - 1);
        if i == 0 {
            return self.base.values[0];
        }
        let (a, b) = (coords[i - 1], coords[i]);
        let t = (x - a) / (b - a);
        self.base.values[i - 1] * (1.0 - t) + self.base.values[i] * t
    }
}
