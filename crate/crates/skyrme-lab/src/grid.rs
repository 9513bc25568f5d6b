//! Uniform cell-centered radial meshes.
//!
//! Nodes sit at r_j = (j + 1/2)·dr, j = 0..n_cells−1, so r = 0 is never a
//! sample point; axis regularity is handled by parity ghost cells instead.

use crate::error::{LabError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: u32,
    dr: f64,
    n_cells: usize,
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn dim(&self) -> u32 {
        self.dim
    }
    pub fn dr(&self) -> f64 {
        self.dr
    }
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }
    pub fn r_max(&self) -> f64 {
        self.n_cells as f64 * self.dr
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// Same spacing and extent; the ambient dimension may differ.
    pub fn compatible(&self, other: &RadialGrid) -> bool {
        self.dr == other.dr && self.n_cells == other.n_cells
    }

    /// The same mesh re-tagged with another ambient dimension.
    pub fn with_dim(&self, dim: u32) -> Result<RadialGrid> {
        build_grid(dim, self.dr, self.r_max())
    }
}

pub fn build_grid(dim: u32, dr: f64, r_max: f64) -> Result<RadialGrid> {
    if dim != 3 && dim != 5 {
        return Err(LabError::Config(format!(
            "grid dimension must be 3 or 5, got {dim}"
        )));
    }
    if !(dr > 0.0) || !dr.is_finite() {
        return Err(LabError::Config(format!(
            "mesh spacing must be positive, got {dr}"
        )));
    }
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(LabError::Config(format!(
            "r_max must be positive, got {r_max}"
        )));
    }
    let n_real = r_max / dr;
    let n_cells = n_real.round() as usize;
    if n_cells == 0 || (n_real - n_cells as f64).abs() > 1e-9 * n_real.max(1.0) {
        return Err(LabError::Config(format!(
            "r_max = {r_max} is not an integer multiple of dr = {dr}"
        )));
    }
    let nodes = (0..n_cells).map(|j| (j as f64 + 0.5) * dr).collect();
    Ok(RadialGrid {
        dim,
        dr,
        n_cells,
        nodes,
    })
}
