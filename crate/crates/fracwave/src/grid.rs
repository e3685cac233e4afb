//! Vertex grids and cell addressing.
//!
//! Level n splits the interval into 3^n cells. A cell is addressed by a word
//! over {1, 2, 3}; its resistance (respectively measure) is the product of
//! the per-letter weights. Vertices carry three coordinate systems: uniform
//! spacing `k / 3^n`, resistance positions, and cumulative-measure positions.

use crate::{params::FractalParams, Error, Result, MAX_LEVEL};

/// Base-3 address of a cell, coarsest letter first, letters in {1, 2, 3}.
///
/// Sorting the 3^n words of length n lexicographically walks the cells left
/// to right, so the word is just the base-3 expansion of the cell index with
/// each digit shifted up by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(Vec<u8>);

impl Word {
    /// Address of cell `index` (0-based, left to right) at the given level.
    pub fn from_cell_index(index: usize, level: usize) -> Self {
        assert!(index < 3usize.pow(level as u32), "cell index out of range");
        let mut letters = vec![1u8; level];
        let mut rest = index;
        for slot in letters.iter_mut().rev() {
            *slot = (rest % 3) as u8 + 1;
            rest /= 3;
        }
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    /// Product of resistance weights along the word.
    pub fn resistance(&self, params: &FractalParams) -> f64 {
        self.0.iter().map(|&j| params.r(j)).product()
    }

    /// Product of measure weights along the word; the cell's mass.
    pub fn measure(&self, params: &FractalParams) -> f64 {
        self.0.iter().map(|&j| params.m(j)).product()
    }
}

/// The level-n vertex set with its three coordinate systems and the per-cell
/// resistance and measure products.
#[derive(Debug, Clone)]
pub struct VertexGrid {
    params: FractalParams,
    level: usize,
    coords_uniform: Vec<f64>,
    coords_resistance: Vec<f64>,
    coords_measure: Vec<f64>,
    cell_resistance: Vec<f64>,
    cell_measure: Vec<f64>,
}

impl VertexGrid {
    /// Builds the level-n grid. Levels above [`MAX_LEVEL`] are rejected.
    pub fn build(params: &FractalParams, level: usize) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::LevelTooLarge {
                level,
                max: MAX_LEVEL,
            });
        }
        let (coords_resistance, cell_resistance) =
            refined_coords(level, [params.r1, params.r2, params.r3]);
        let (coords_measure, cell_measure) =
            refined_coords(level, [params.m1, params.m2, params.m3]);
        let n = 3usize.pow(level as u32);
        let coords_uniform = (0..=n).map(|k| k as f64 / n as f64).collect();
        Ok(Self {
            params: *params,
            level,
            coords_uniform,
            coords_resistance,
            coords_measure,
            cell_resistance,
            cell_measure,
        })
    }

    pub fn params(&self) -> &FractalParams {
        &self.params
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.coords_uniform.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cell_resistance.len()
    }

    pub fn coords_uniform(&self) -> &[f64] {
        &self.coords_uniform
    }

    pub fn coords_resistance(&self) -> &[f64] {
        &self.coords_resistance
    }

    pub fn coords_measure(&self) -> &[f64] {
        &self.coords_measure
    }

    /// Resistance of cell `i` (product of r-weights along its word).
    pub fn cell_resistance(&self) -> &[f64] {
        &self.cell_resistance
    }

    /// Measure of cell `i` (product of m-weights along its word).
    pub fn cell_measure(&self) -> &[f64] {
        &self.cell_measure
    }

    /// Checks that `f` is a vertex function on this grid.
    pub fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch {
                level: self.level,
                want: self.vertex_count(),
                got: f.len(),
            });
        }
        Ok(())
    }
}

/// Coordinates and cell lengths after `level` refinements with the given
/// weight triple.
///
/// Existing vertices are carried over unchanged on each refinement, so the
/// level-n coordinates reappear bit-identically inside level n+1. Cell
/// lengths are maintained as explicit weight products rather than coordinate
/// differences; with `MAX_LEVEL` capped the products stay far above the
/// rounding floor and the new interior points keep the arrays strictly
/// increasing.
fn refined_coords(level: usize, weights: [f64; 3]) -> (Vec<f64>, Vec<f64>) {
    let mut coords = vec![0.0, 1.0];
    let mut cells = vec![1.0];
    for _ in 0..level {
        let mut next_coords = Vec::with_capacity(cells.len() * 3 + 1);
        let mut next_cells = Vec::with_capacity(cells.len() * 3);
        for (i, &len) in cells.iter().enumerate() {
            let a = coords[i];
            next_coords.push(a);
            next_coords.push(a + len * weights[0]);
            next_coords.push(a + len * (weights[0] + weights[1]));
            next_cells.push(len * weights[0]);
            next_cells.push(len * weights[1]);
            next_cells.push(len * weights[2]);
        }
        next_coords.push(1.0);
        coords = next_coords;
        cells = next_cells;
    }
    (coords, cells)
}
