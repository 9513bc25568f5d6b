//! Measured quantities: energy, charge, continuation quantity, decay
//! monitors, Sobolev norms, PDE residuals, and the virial split.

use crate::cutoff::CutoffFamily;
use crate::error::{LabError, Result};
use crate::exec::{pairwise_sum, Execution};
use crate::state::{FieldState, VState};
use crate::stencil::{gradient, laplacian, AxisParity};
use crate::transforms::{a_minus_one, tilde_a_raw, PhiContext};

/// One time-sample of every monitored quantity. The CSV column order is
/// pinned by the series writer.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub charge: i64,
    pub cont: f64,
    pub decay_v: f64,
    pub decay_phi: f64,
    pub decay_a: f64,
    pub res_phi: f64,
    pub res_phit: f64,
    pub hs_phi: f64,
    pub hsm1_phit: f64,
    pub l2_phitt: f64,
    pub l2_phittt: f64,
    /// Set when the compact part of Φ had not decayed at r_max.
    pub decay_warning: bool,
}

/// Composite midpoint quadrature with one-sided endpoint-slope corrections,
/// 4th order for smooth integrands: ∫₀^{R} g ≈ dr·Σg_j + (dr²/24)(g'(R) − g'(0)).
pub fn composite_quadrature(g: &[f64], dr: f64) -> f64 {
    let n = g.len();
    if n < 3 {
        return dr * g.iter().sum::<f64>();
    }
    let bulk = dr * pairwise_sum(g);
    // quadratic-fit slopes at r = 0 and r = R from the outermost samples
    let slope0 = (-2.0 * g[0] + 3.0 * g[1] - g[2]) / dr;
    let slope_end = (2.0 * g[n - 1] - 3.0 * g[n - 2] + g[n - 3]) / dr;
    bulk + dr * dr / 24.0 * (slope_end - slope0)
}

/// |sin u| evaluated as sin of the distance to the nearest multiple of π
/// (π-periodicity of sin²); removes the large-argument cancellation near
/// the axis plateau u ≈ N₁π.
#[inline]
fn sin_stable(u: f64) -> f64 {
    (u - std::f64::consts::PI * (u / std::f64::consts::PI).round()).sin()
}

fn energy_density_terms(state: &FieldState, sigma_model: bool) -> Vec<f64> {
    let grid = &state.grid;
    let plateau = std::f64::consts::PI * (state.u_at_axis() / std::f64::consts::PI).round();
    let outer = crate::stencil::extrapolate_outer(&state.u);
    let ur = gradient(
        &state.u,
        grid,
        AxisParity::OddAbout(plateau),
        outer,
        Execution::Sequential,
    );
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let s = sin_stable(state.u[j]);
            let s2_r2 = (s / r) * (s / r);
            let grad2 = state.ut[j] * state.ut[j] + ur[j] * ur[j];
            let dens = if sigma_model {
                0.5 * grad2 + s2_r2
            } else {
                (1.0 + 2.0 * s2_r2) * 0.5 * grad2 + s2_r2 + 0.5 * s2_r2 * s2_r2
            };
            dens * r * r
        })
        .collect()
}

/// Conserved energy of the Skyrme flow,
/// ∫ {(1+2sin²u/r²)(u_t²+u_r²)/2 + sin²u/r² + sin⁴u/(2r⁴)} r² dr.
pub fn energy(state: &FieldState) -> f64 {
    composite_quadrature(&energy_density_terms(state, false), state.grid.dr())
}

/// Conserved energy of the σ-model flow (no quartic terms).
pub fn energy_sigma(state: &FieldState) -> f64 {
    composite_quadrature(&energy_density_terms(state, true), state.grid.dr())
}

/// (u(r_max) − u(0))/π, rounded; errors if off an integer by more than 0.1.
pub fn topological_charge(state: &FieldState) -> Result<i64> {
    let u0 = state.u_at_axis();
    let q = (state.u[state.grid.n_cells() - 1] - u0) / std::f64::consts::PI;
    let rounded = q.round();
    if (q - rounded).abs() > 0.1 {
        return Err(LabError::Data(format!(
            "boundary values are not charge-quantized: (u(r_max) - u(0))/pi = {q:.6}"
        )));
    }
    Ok(rounded as i64)
}

/// ‖(1+r)(|v| + |v_t| + |v_r|)‖_∞ with prescribed outer ghost values for
/// the v_r stencil.
pub fn continuation_quantity_with(state: &VState, outer_v: [f64; 2]) -> f64 {
    let vr = gradient(
        &state.v,
        &state.grid,
        AxisParity::Even,
        outer_v,
        Execution::Sequential,
    );
    state
        .grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, &r)| (1.0 + r) * (state.v[j].abs() + state.vt[j].abs() + vr[j].abs()))
        .fold(0.0, f64::max)
}

/// As [`continuation_quantity_with`], closing the stencil by quadratic
/// extrapolation of the last samples.
pub fn continuation_quantity(state: &VState) -> f64 {
    continuation_quantity_with(state, crate::stencil::extrapolate_outer(&state.v))
}

/// sup (1+r²)|v|.
pub fn decay_v_monitor(state: &VState) -> f64 {
    state
        .grid
        .nodes()
        .iter()
        .zip(&state.v)
        .map(|(&r, &v)| (1.0 + r * r) * v.abs())
        .fold(0.0, f64::max)
}

/// sup (1+r²)|Φ| over given Φ samples.
pub fn decay_phi_monitor(phi: &[f64], nodes: &[f64]) -> f64 {
    nodes
        .iter()
        .zip(phi)
        .map(|(&r, &p)| (1.0 + r * r) * p.abs())
        .fold(0.0, f64::max)
}

/// sup (1+r⁴)|Ã(r,v) − 1|.
pub fn decay_a_monitor(state: &VState, family: &CutoffFamily) -> f64 {
    state
        .grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, &r)| (1.0 + r.powi(4)) * a_minus_one(r, state.v[j], family).abs())
        .fold(0.0, f64::max)
}

/// ‖Φ_tt − Δ₅Φ − box_phi_rhs‖_{L²}: vanishes (to discretization error) when
/// `vtt` is the flow acceleration of a solution, stays O(1) otherwise.
pub fn residual_box_phi(
    ctx: &PhiContext,
    state: &VState,
    vtt: &[f64],
    outer_v: [f64; 2],
    exec: Execution,
) -> Result<f64> {
    let grid = &state.grid;
    let phi = ctx.phi_from_v(state, exec)?;
    let phi_tt = ctx.phi_tt_from_state(state, vtt)?;
    let rhs = ctx.box_phi_rhs_with(state, &phi, exec)?;
    let g0 = grid.r_max() + 0.5 * grid.dr();
    let g1 = grid.r_max() + 1.5 * grid.dr();
    let ghosts = [
        ctx.phi_value(g0, outer_v[0])?,
        ctx.phi_value(g1, outer_v[1])?,
    ];
    let lap = laplacian(&phi, grid, AxisParity::Even, ghosts, exec);
    let resid: Vec<f64> = (0..grid.n_cells())
        .map(|j| phi_tt[j] - lap[j] - rhs[j])
        .collect();
    Ok(crate::sobolev::l2_norm_radial(&resid, grid))
}

/// ‖Φ_ttt − Δ₅Φ_t − box_phit_rhs‖_{L²}.
#[allow(clippy::too_many_arguments)]
pub fn residual_box_phit(
    ctx: &PhiContext,
    state: &VState,
    vtt: &[f64],
    vttt: &[f64],
    outer_v: [f64; 2],
    outer_vt: [f64; 2],
    exec: Execution,
) -> Result<f64> {
    let grid = &state.grid;
    let phi_t = ctx.phi_t_from_state(state)?;
    let phi_ttt = ctx.phi_ttt_from_state(state, vtt, vttt)?;
    let rhs = ctx.box_phit_rhs(state)?;
    let g0 = grid.r_max() + 0.5 * grid.dr();
    let g1 = grid.r_max() + 1.5 * grid.dr();
    let ghosts = [
        tilde_a_raw(g0, outer_v[0], ctx.family).sqrt() * outer_vt[0],
        tilde_a_raw(g1, outer_v[1], ctx.family).sqrt() * outer_vt[1],
    ];
    let lap = laplacian(&phi_t, grid, AxisParity::Even, ghosts, exec);
    let resid: Vec<f64> = (0..grid.n_cells())
        .map(|j| phi_ttt[j] - lap[j] - rhs[j])
        .collect();
    Ok(crate::sobolev::l2_norm_radial(&resid, grid))
}

/// Derrick split of the static energy: E2 carries the quadratic terms,
/// E4 the quartic ones; E2 + E4 equals the static energy and E2 = E4 for
/// exact skyrmions. `u`, `ur` are cell-centered samples with spacing `dr`.
pub fn virial_decompose(u: &[f64], ur: &[f64], dr: f64) -> (f64, f64) {
    let g2: Vec<f64> = u
        .iter()
        .zip(ur)
        .enumerate()
        .map(|(j, (&uu, &uur))| {
            let r = (j as f64 + 0.5) * dr;
            let s = sin_stable(uu);
            (0.5 * uur * uur + (s / r) * (s / r)) * r * r
        })
        .collect();
    let g4: Vec<f64> = u
        .iter()
        .zip(ur)
        .enumerate()
        .map(|(j, (&uu, &uur))| {
            let r = (j as f64 + 0.5) * dr;
            let s2_r2 = (sin_stable(uu) / r) * (sin_stable(uu) / r);
            (s2_r2 * uur * uur + 0.5 * s2_r2 * s2_r2) * r * r
        })
        .collect();
    (composite_quadrature(&g2, dr), composite_quadrature(&g4, dr))
}

/// Static Skyrme energy from (u, u_r) samples; equals E2 + E4.
pub fn static_energy(u: &[f64], ur: &[f64], dr: f64) -> f64 {
    let g: Vec<f64> = u
        .iter()
        .zip(ur)
        .enumerate()
        .map(|(j, (&uu, &uur))| {
            let r = (j as f64 + 0.5) * dr;
            let s2_r2 = (sin_stable(uu) / r) * (sin_stable(uu) / r);
            ((1.0 + 2.0 * s2_r2) * 0.5 * uur * uur + s2_r2 + 0.5 * s2_r2 * s2_r2) * r * r
        })
        .collect();
    composite_quadrature(&g, dr)
}

/// max over the second half divided by max over the first half; the
/// boundedness criteria ask for this ratio to stay ≤ 1.05.
pub fn second_half_growth(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 1.0;
    }
    let mid = xs.len() / 2;
    let first = xs[..mid].iter().cloned().fold(f64::MIN, f64::max);
    let second = xs[mid..].iter().cloned().fold(f64::MIN, f64::max);
    if first == 0.0 {
        if second == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        second / first
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::state::{u_from_v, VState};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_energy_is_zero() {
        let g = build_grid(3, 1.0 / 64.0, 8.0).unwrap();
        let st = FieldState::vacuum(g).unwrap();
        assert_eq!(energy(&st), 0.0);
        assert_eq!(energy_sigma(&st), 0.0);
    }

    #[test]
    fn plateau_energy_is_zero() {
        // u ≡ N₁π sampled: sin vanishes, derivatives vanish
        let g = build_grid(3, 1.0 / 64.0, 8.0).unwrap();
        let n = g.n_cells();
        let st = FieldState::new(0.0, g, vec![PI; n], vec![0.0; n]).unwrap();
        assert!(energy(&st).abs() < 1e-24);
    }

    #[test]
    fn energy_gaussian_golden() {
        // u₀ = r e^{−r²}, u₁ = 0, N₁ = 0; 30-digit oracle: 0.3357303430396042
        let g = build_grid(3, 1.0 / 512.0, 12.0).unwrap();
        let u: Vec<f64> = g.nodes().iter().map(|&r| r * (-r * r).exp()).collect();
        let ut = vec![0.0; g.n_cells()];
        let st = FieldState::new(0.0, g, u, ut).unwrap();
        assert_relative_eq!(energy(&st), 0.335_730_343_039_604_2, max_relative = 1e-9);
    }

    #[test]
    fn charge_examples() {
        let g = build_grid(3, 1.0 / 32.0, 16.0).unwrap();
        let st = FieldState::vacuum(g.clone()).unwrap();
        assert_eq!(topological_charge(&st).unwrap(), 0);

        // skyrmion-like boundary: u(0) = π, u(∞) = 0 → −1
        let family = crate::cutoff::CutoffFamily::new(1);
        let g5 = g.with_dim(5).unwrap();
        let v: Vec<f64> = g5.nodes().iter().map(|&r| 0.5 * (-r * r).exp()).collect();
        let vt = vec![0.0; g5.n_cells()];
        let vs = VState::new(0.0, g5, v, vt).unwrap();
        let fs = u_from_v(&vs, &family).unwrap();
        assert_eq!(topological_charge(&fs).unwrap(), -1);

        // raw Turok–Spergel samples: u(0) = 0, u(∞) = π → +1
        let u: Vec<f64> = g.nodes().iter().map(|&r| 2.0 * r.atan()).collect();
        let ut = vec![0.0; g.n_cells()];
        let ts = FieldState::new(0.0, g, u, ut).unwrap();
        assert_eq!(topological_charge(&ts).unwrap(), 1);
    }

    #[test]
    fn charge_rejects_non_quantized_boundary() {
        // a ramp from 0 to 1.3: (u(r_max) − u(0))/π = 0.41, off any integer
        let g = build_grid(3, 1.0 / 32.0, 4.0).unwrap();
        let u: Vec<f64> = g.nodes().iter().map(|&r| 1.3 * r / 4.0).collect();
        let ut = vec![0.0; g.n_cells()];
        let st = FieldState::new(0.0, g, u, ut).unwrap();
        assert!(topological_charge(&st).is_err());
    }

    #[test]
    fn continuation_examples() {
        let g = build_grid(5, 1.0 / 512.0, 8.0).unwrap();
        let zero = VState::vacuum(g.clone()).unwrap();
        assert_eq!(continuation_quantity(&zero), 0.0);

        // v = e^{−r²}, v_t = 0: dense-maximization oracle gives
        // max (1+r)(1+2r)e^{−r²} = 2.4997071468663270 at r = 1/√2
        let v: Vec<f64> = g.nodes().iter().map(|&r| (-r * r).exp()).collect();
        let vt = vec![0.0; g.n_cells()];
        let st = VState::new(0.0, g, v, vt).unwrap();
        assert_relative_eq!(
            continuation_quantity(&st),
            2.499_707_146_866_327,
            max_relative = 1e-5
        );
    }

    #[test]
    fn virial_sum_is_energy() {
        let g = build_grid(3, 1.0 / 128.0, 10.0).unwrap();
        let u: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&r| PI * (-0.8 * r).exp() * (1.0 + r))
            .collect();
        let ur: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&r| PI * (-0.8 * r).exp() * (1.0 - 0.8 * (1.0 + r)))
            .collect();
        let (e2, e4) = virial_decompose(&u, &ur, g.dr());
        let e = static_energy(&u, &ur, g.dr());
        assert_relative_eq!(e2 + e4, e, max_relative = 1e-12);
        assert!(e2 > 0.0 && e4 > 0.0);
        // u ≡ 0 → (0, 0)
        let z = vec![0.0; g.n_cells()];
        let (z2, z4) = virial_decompose(&z, &z, g.dr());
        assert_eq!((z2, z4), (0.0, 0.0));
    }

    #[test]
    fn growth_ratio() {
        assert_eq!(second_half_growth(&[1.0, 1.0, 1.0, 1.0]), 1.0);
        assert!(second_half_growth(&[1.0, 1.0, 2.0, 2.0]) > 1.9);
        assert_eq!(second_half_growth(&[0.0, 0.0, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn composite_quadrature_fourth_order() {
        let f = |r: f64| (1.5 * r).sin() * (-r).exp();
        let exact = 0.454_996_453_846_755_86; // ∫₀⁴, 25-digit oracle
        let q = crate::quad::integrate_default(f, 0.0, 4.0);
        assert_relative_eq!(q.value, exact, max_relative = 1e-11);
        let mut errs = Vec::new();
        for k in [7, 8] {
            let dr = (2.0f64).powi(-k);
            let n = (4.0 / dr) as usize;
            let g: Vec<f64> = (0..n).map(|j| f((j as f64 + 0.5) * dr)).collect();
            errs.push((composite_quadrature(&g, dr) - exact).abs());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(
            order > 3.5,
            "composite rule order {order} (errors {errs:?})"
        );
    }
}
