//! Deterministic CSV and record writers.
//!
//! Floats are printed with Rust's shortest round-trip formatting and rows
//! follow the grid order, so identical runs produce identical bytes.

use std::io::{self, Write};

use fracwave::{EigenvalueTree, VertexGrid};

/// `level,k,value,renormalized,branch,parent_k` records for one tree level.
pub fn write_spectrum(out: &mut dyn Write, tree: &EigenvalueTree, n: usize) -> io::Result<()> {
    writeln!(out, "level,k,value,renormalized,branch,parent_k")?;
    let scale = tree.params().c0.powi(n as i32);
    for node in tree.level(n) {
        let parent = node.parent_k.map(|k| k.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            n,
            node.k_index,
            node.value,
            scale * node.value,
            node.branch.as_str(),
            parent
        )?;
    }
    Ok(())
}

/// `x_uniform,x_resistance,x_measure,value` rows, one per vertex.
pub fn write_vertex_table(
    out: &mut dyn Write,
    grid: &VertexGrid,
    values: &[f64],
) -> io::Result<()> {
    writeln!(out, "x_uniform,x_resistance,x_measure,value")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            grid.coords_uniform()[k],
            grid.coords_resistance()[k],
            grid.coords_measure()[k],
            v
        )?;
    }
    Ok(())
}

/// Multi-time table with a leading `t` column holding the requested time.
pub fn write_wave_table(
    out: &mut dyn Write,
    grid: &VertexGrid,
    times: &[f64],
    snapshots: &[Vec<f64>],
) -> io::Result<()> {
    writeln!(out, "t,x_uniform,x_resistance,x_measure,value")?;
    for (t, values) in times.iter().zip(snapshots) {
        for (k, v) in values.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                t,
                grid.coords_uniform()[k],
                grid.coords_resistance()[k],
                grid.coords_measure()[k],
                v
            )?;
        }
    }
    Ok(())
}
