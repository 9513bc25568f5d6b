//! Field state containers and the u ↔ v substitution u = r·v + φ(r).

use crate::cutoff::CutoffFamily;
use crate::error::{LabError, Result};
use crate::grid::RadialGrid;

/// (u, u_t) sampled on a dim-3 grid: u is the azimuthal angle in radians.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub t: f64,
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

/// (v, v_t) sampled on a dim-5 grid: v = (u − φ)/r is the regular
/// even representative.
#[derive(Debug, Clone)]
pub struct VState {
    pub t: f64,
    pub grid: RadialGrid,
    pub v: Vec<f64>,
    pub vt: Vec<f64>,
}

impl FieldState {
    pub fn new(t: f64, grid: RadialGrid, u: Vec<f64>, ut: Vec<f64>) -> Result<Self> {
        if grid.dim() != 3 {
            return Err(LabError::Data("FieldState lives on a dim-3 grid".into()));
        }
        if u.len() != grid.n_cells() || ut.len() != grid.n_cells() {
            return Err(LabError::Data(
                "field sample length does not match the grid".into(),
            ));
        }
        Ok(FieldState { t, grid, u, ut })
    }

    pub fn vacuum(grid: RadialGrid) -> Result<Self> {
        let n = grid.n_cells();
        FieldState::new(0.0, grid, vec![0.0; n], vec![0.0; n])
    }

    /// Quadratic extrapolation of u to r = 0 from the first three nodes.
    pub fn u_at_axis(&self) -> f64 {
        extrapolate_to_zero(self.grid.nodes(), &self.u)
    }
}

impl VState {
    pub fn new(t: f64, grid: RadialGrid, v: Vec<f64>, vt: Vec<f64>) -> Result<Self> {
        if grid.dim() != 5 {
            return Err(LabError::Data("VState lives on a dim-5 grid".into()));
        }
        if v.len() != grid.n_cells() || vt.len() != grid.n_cells() {
            return Err(LabError::Data(
                "field sample length does not match the grid".into(),
            ));
        }
        Ok(VState { t, grid, v, vt })
    }

    pub fn vacuum(grid: RadialGrid) -> Result<Self> {
        let n = grid.n_cells();
        VState::new(0.0, grid, vec![0.0; n], vec![0.0; n])
    }

    /// One-sided estimate of v_r at the axis; vanishes for regular states.
    pub fn vr_at_axis(&self) -> f64 {
        // derivative at r = 0 of the quadratic fit through the first 3 nodes
        let r = self.grid.nodes();
        let f = &self.v;
        let (r0, r1, r2) = (r[0], r[1], r[2]);
        let l0 = -(r1 + r2) / ((r0 - r1) * (r0 - r2));
        let l1 = -(r0 + r2) / ((r1 - r0) * (r1 - r2));
        let l2 = -(r0 + r1) / ((r2 - r0) * (r2 - r1));
        f[0] * l0 + f[1] * l1 + f[2] * l2
    }
}

/// Value of the quadratic through (r_i, f_i), i = 0..3, at r = 0.
pub fn extrapolate_to_zero(r: &[f64], f: &[f64]) -> f64 {
    let (r0, r1, r2) = (r[0], r[1], r[2]);
    let l0 = r1 * r2 / ((r0 - r1) * (r0 - r2));
    let l1 = r0 * r2 / ((r1 - r0) * (r1 - r2));
    let l2 = r0 * r1 / ((r2 - r0) * (r2 - r1));
    f[0] * l0 + f[1] * l1 + f[2] * l2
}

/// v = (u − φ)/r, v_t = u_t/r on the dim-5 twin of the grid.
pub fn v_from_u(state: &FieldState, family: &CutoffFamily) -> Result<VState> {
    let grid5 = state.grid.with_dim(5)?;
    let n = grid5.n_cells();
    let mut v = Vec::with_capacity(n);
    let mut vt = Vec::with_capacity(n);
    for j in 0..n {
        let r = grid5.node(j);
        v.push((state.u[j] - family.phi(r)) / r);
        vt.push(state.ut[j] / r);
    }
    VState::new(state.t, grid5, v, vt)
}

/// u = r·v + φ, u_t = r·v_t on the dim-3 twin of the grid.
pub fn u_from_v(state: &VState, family: &CutoffFamily) -> Result<FieldState> {
    let grid3 = state.grid.with_dim(3)?;
    let n = grid3.n_cells();
    let mut u = Vec::with_capacity(n);
    let mut ut = Vec::with_capacity(n);
    for j in 0..n {
        let r = grid3.node(j);
        u.push(r * state.v[j] + family.phi(r));
        ut.push(r * state.vt[j]);
    }
    FieldState::new(state.t, grid3, u, ut)
}
