//! Initial-data families, compatibility checks, and the initial-data
//! validator.
//!
//! Every family produces (u₀, u₁) with u₀(0) = N₁π and vacuum-compatible
//! boundary behavior, together with the values of (u, u_t) at the two outer
//! ghost radii (the boundary extension the evolver freezes).

use crate::cutoff::{smoothstep01, CutoffFamily};
use crate::diagnostics::energy;
use crate::error::{LabError, Result};
use crate::evolve::{Evolver, Mode, SimState};
use crate::exec::Execution;
use crate::grid::{build_grid, RadialGrid};
use crate::skyrmion::{find_skyrmion, profile_on_grid, ShootParams};
use crate::sobolev::sobolev_norm;
use crate::state::{v_from_u, FieldState, VState};
use crate::transforms::PhiContext;

/// Initial-data family descriptors, as configured from the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum DataFamily {
    /// u₀ = φ + amp·r·e^{−((r−center)/width)²}, u₁ = 0.
    Gaussian { amp: f64, width: f64, center: f64 },
    /// static skyrmion plus a compactly supported bump (N₁ = 1 sector).
    SkyrmionPerturb { amp: f64, width: f64, center: f64 },
    /// σ-model Turok–Spergel data u₀ = 2 arctan(r/T), u₁ = 2r/(T²+r²),
    /// smoothly cut to vacuum beyond r = T + 1.
    TsBlowup { t_blowup: f64 },
}

impl DataFamily {
    /// Effective data radius used by the propagation-padding check
    /// (envelope below ~1e−7 of peak beyond it).
    pub fn extent(&self) -> f64 {
        match self {
            DataFamily::Gaussian { width, center, .. } => center + 4.0 * width,
            DataFamily::SkyrmionPerturb { width, center, .. } => center + width,
            DataFamily::TsBlowup { t_blowup } => t_blowup + 2.0,
        }
    }
}

/// Initial data in both representations plus the outer ghost extension.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub field: FieldState,
    pub vstate: VState,
    pub outer_u: [f64; 2],
    pub outer_ut: [f64; 2],
}

/// Turok–Spergel closed form u(t, r) = 2 arctan(r/(T − t)).
pub fn ts_exact_u(t: f64, r: f64, t_blowup: f64) -> f64 {
    2.0 * (r / (t_blowup - t)).atan()
}

pub fn ts_exact_ut(t: f64, r: f64, t_blowup: f64) -> f64 {
    let s = t_blowup - t;
    2.0 * r / (s * s + r * r)
}

/// C^∞ bump, 1 at the center, supported on |x| < 1.
fn compact_bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

fn compat_check(data: &InitialData, family: &CutoffFamily) -> Result<()> {
    let dr = data.field.grid.dr();
    let axis = data.field.u_at_axis();
    let tol_axis = (10.0 * dr * dr).max(1e-6) * (1.0 + family.n1() as f64);
    if (axis - family.plateau()).abs() > tol_axis {
        return Err(LabError::Data(format!(
            "u(0) = {axis:.6} is not the boundary plateau {:.6}",
            family.plateau()
        )));
    }
    let n = data.field.grid.n_cells();
    let tol_outer = 0.05;
    if data.field.u[n - 1].abs() > tol_outer || data.field.ut[n - 1].abs() > tol_outer {
        return Err(LabError::Data(format!(
            "data has not decayed at r_max: u = {:.3e}, ut = {:.3e}",
            data.field.u[n - 1],
            data.field.ut[n - 1]
        )));
    }
    Ok(())
}

/// Build (u₀, u₁) and the v-representation for a family on a dim-3 grid.
pub fn make_data(
    family_desc: &DataFamily,
    grid3: &RadialGrid,
    family: &CutoffFamily,
) -> Result<InitialData> {
    if grid3.dim() != 3 {
        return Err(LabError::Config("make_data expects a dim-3 grid".into()));
    }
    let g0 = grid3.r_max() + 0.5 * grid3.dr();
    let g1 = grid3.r_max() + 1.5 * grid3.dr();
    let (u, ut, outer_u, outer_ut): (Vec<f64>, Vec<f64>, [f64; 2], [f64; 2]) = match family_desc {
        DataFamily::Gaussian { amp, width, center } => {
            if *width <= 0.0 {
                return Err(LabError::Data("gaussian width must be positive".into()));
            }
            let prof = |r: f64| {
                let z = (r - center) / width;
                family.phi(r) + amp * r * (-z * z).exp()
            };
            (
                grid3.nodes().iter().map(|&r| prof(r)).collect(),
                vec![0.0; grid3.n_cells()],
                [prof(g0), prof(g1)],
                [0.0, 0.0],
            )
        }
        DataFamily::SkyrmionPerturb { amp, width, center } => {
            if family.n1() != 1 {
                return Err(LabError::Data(
                    "skyrmion data lives in the N₁ = 1 sector".into(),
                ));
            }
            if !(center - width > 0.0 && center + width < grid3.r_max() - 2.0 * grid3.dr()) {
                return Err(LabError::Data(
                    "perturbation bump must sit strictly inside the grid".into(),
                ));
            }
            let solve = find_skyrmion(&ShootParams::default(), -8.0, -0.5, 1e-12)?;
            let ext = grid3.r_max() + 8.0 * grid3.dr();
            let prof = profile_on_grid(solve.b_star, grid3, ext)?;
            let u: Vec<f64> = grid3
                .nodes()
                .iter()
                .zip(&prof.u)
                .map(|(&r, &up)| up + amp * compact_bump((r - center) / width))
                .collect();
            (
                u,
                vec![0.0; grid3.n_cells()],
                prof.outer_ghost_u,
                [0.0, 0.0],
            )
        }
        DataFamily::TsBlowup { t_blowup } => {
            if family.n1() != 0 {
                return Err(LabError::Data(
                    "blow-up data lives in the N₁ = 0 sector".into(),
                ));
            }
            if *t_blowup <= 0.0 {
                return Err(LabError::Data("blow-up time must be positive".into()));
            }
            if grid3.r_max() < t_blowup + 2.0 {
                return Err(LabError::Data(
                    "grid must contain the cut radius T + 2".into(),
                ));
            }
            let cut = |r: f64| smoothstep01(t_blowup + 2.0 - r);
            (
                grid3
                    .nodes()
                    .iter()
                    .map(|&r| cut(r) * ts_exact_u(0.0, r, *t_blowup))
                    .collect(),
                grid3
                    .nodes()
                    .iter()
                    .map(|&r| cut(r) * ts_exact_ut(0.0, r, *t_blowup))
                    .collect(),
                [0.0, 0.0],
                [0.0, 0.0],
            )
        }
    };
    let field = FieldState::new(0.0, grid3.clone(), u, ut)?;
    let vstate = v_from_u(&field, family)?;
    let data = InitialData {
        field,
        vstate,
        outer_u,
        outer_ut,
    };
    compat_check(&data, family)?;
    Ok(data)
}

/// Anything that can realize initial data at a prescribed resolution; the
/// validator uses this to rebuild the same data on a refined mesh.
pub trait DataSource {
    fn realize(&self, grid3: &RadialGrid, family: &CutoffFamily) -> Result<InitialData>;
    fn label(&self) -> String;
}

impl DataSource for DataFamily {
    fn realize(&self, grid3: &RadialGrid, family: &CutoffFamily) -> Result<InitialData> {
        make_data(self, grid3, family)
    }
    fn label(&self) -> String {
        format!("{self:?}")
    }
}

/// Smooth gaussian pair (v₀, v₁) for validator studies; unlike the
/// time-symmetric `Gaussian` family it has v₁ ≠ 0, so every Φ-derivative
/// norm is nonzero.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPair {
    pub amp0: f64,
    pub amp1: f64,
    pub width: f64,
    pub center: f64,
}

impl DataSource for GaussianPair {
    fn realize(&self, grid3: &RadialGrid, family: &CutoffFamily) -> Result<InitialData> {
        let grid5 = grid3.with_dim(5)?;
        let env = |r: f64, a: f64| {
            let z = (r - self.center) / self.width;
            a * (-z * z).exp()
        };
        let v: Vec<f64> = grid5.nodes().iter().map(|&r| env(r, self.amp0)).collect();
        let vt: Vec<f64> = grid5.nodes().iter().map(|&r| env(r, self.amp1)).collect();
        let vstate = VState::new(0.0, grid5, v, vt)?;
        let field = crate::state::u_from_v(&vstate, family)?;
        let g0 = grid3.r_max() + 0.5 * grid3.dr();
        let g1 = grid3.r_max() + 1.5 * grid3.dr();
        Ok(InitialData {
            field,
            vstate,
            outer_u: [
                family.phi(g0) + g0 * env(g0, self.amp0),
                family.phi(g1) + g1 * env(g1, self.amp0),
            ],
            outer_ut: [g0 * env(g0, self.amp1), g1 * env(g1, self.amp1)],
        })
    }
    fn label(&self) -> String {
        format!("gaussian pair {self:?}")
    }
}

/// Negative control for the validator: a triangle kink in v₀ (limited
/// Sobolev regularity) with a smooth nonzero v₁.
#[derive(Debug, Clone, Copy)]
pub struct KinkedData {
    pub amp: f64,
    pub center: f64,
    pub width: f64,
}

impl DataSource for KinkedData {
    fn realize(&self, grid3: &RadialGrid, family: &CutoffFamily) -> Result<InitialData> {
        let grid5 = grid3.with_dim(5)?;
        let v: Vec<f64> = grid5
            .nodes()
            .iter()
            .map(|&r| self.amp * (1.0 - ((r - self.center) / self.width).abs()).max(0.0))
            .collect();
        let vt: Vec<f64> = grid5
            .nodes()
            .iter()
            .map(|&r| {
                let z = (r - self.center) / self.width;
                self.amp * (-z * z).exp()
            })
            .collect();
        let vstate = VState::new(0.0, grid5, v, vt)?;
        let field = crate::state::u_from_v(&vstate, family)?;
        Ok(InitialData {
            field,
            vstate,
            outer_u: [0.0, 0.0],
            outer_ut: [0.0, 0.0],
        })
    }
    fn label(&self) -> String {
        "kinked control".into()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationEntry {
    pub name: String,
    pub coarse: f64,
    pub fine: f64,
    pub rel_change: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub s: f64,
    pub label: String,
    pub entries: Vec<ValidationEntry>,
    pub any_flagged: bool,
}

fn validator_norms(
    src: &dyn DataSource,
    s: f64,
    dr: f64,
    r_max: f64,
    family: &CutoffFamily,
    exec: Execution,
) -> Result<Vec<(String, f64)>> {
    let grid3 = build_grid(3, dr, r_max)?;
    let data = src.realize(&grid3, family)?;
    let grid5 = data.vstate.grid.clone();
    let g0 = grid5.r_max() + 0.5 * grid5.dr();
    let g1 = grid5.r_max() + 1.5 * grid5.dr();
    let outer_v = [
        (data.outer_u[0] - family.phi(g0)) / g0,
        (data.outer_u[1] - family.phi(g1)) / g1,
    ];
    let outer_vt = [data.outer_ut[0] / g0, data.outer_ut[1] / g1];
    let evolver = Evolver::new(Mode::Skyrme, grid5.clone(), family, exec, outer_v, outer_vt)?;
    let state = SimState {
        t: 0.0,
        y: data.vstate.v.clone(),
        yt: data.vstate.vt.clone(),
    };
    let vtt = evolver.accel(&state.y, &state.yt);
    let vttt = evolver.third_time_derivative(&state)?;
    let ctx = PhiContext::new(&grid5, family, exec)?;
    let phi_t = ctx.phi_t_from_state(&data.vstate)?;
    let phi_tt = ctx.phi_tt_from_state(&data.vstate, &vtt)?;
    let phi_ttt = ctx.phi_ttt_from_state(&data.vstate, &vtt, &vttt)?;
    Ok(vec![
        ("energy".into(), energy(&data.field)),
        ("phit_h1".into(), sobolev_norm(&phi_t, 1.0, &grid5, exec)?),
        (
            "phitt_l2".into(),
            crate::sobolev::l2_norm_radial(&phi_tt, &grid5),
        ),
        ("phitt_h1".into(), sobolev_norm(&phi_tt, 1.0, &grid5, exec)?),
        (
            "phittt_l2".into(),
            crate::sobolev::l2_norm_radial(&phi_ttt, &grid5),
        ),
        (
            "phit_hs1".into(),
            sobolev_norm(&phi_t, s - 1.0, &grid5, exec)?,
        ),
        (
            "phitt_hs2".into(),
            sobolev_norm(&phi_tt, s - 2.0, &grid5, exec)?,
        ),
    ])
}

/// Compute the data norms at dr and dr/2 and flag anything non-finite or
/// refinement-unstable (relative change above 10%).
pub fn validate_initial_data(
    src: &dyn DataSource,
    s: f64,
    dr: f64,
    r_max: f64,
    family: &CutoffFamily,
    exec: Execution,
) -> Result<ValidationReport> {
    if !(s > 3.5 && s < 3.6) {
        return Err(LabError::Config(format!(
            "sobolev exponent out of range: need 7/2 < s < 18/5, got {s}"
        )));
    }
    let coarse = validator_norms(src, s, dr, r_max, family, exec)?;
    let fine = validator_norms(src, s, dr / 2.0, r_max, family, exec)?;
    let mut entries = Vec::new();
    let mut any_flagged = false;
    for ((name, c), (_, f)) in coarse.into_iter().zip(fine) {
        let scale = f.abs().max(c.abs());
        let rel_change = (f - c).abs() / scale.max(1e-300);
        // entries that vanish identically carry no instability signal
        let flagged = !c.is_finite() || !f.is_finite() || (rel_change > 0.1 && scale > 1e-9);
        any_flagged |= flagged;
        entries.push(ValidationEntry {
            name,
            coarse: c,
            fine: f,
            rel_change,
            flagged,
        });
    }
    Ok(ValidationReport {
        s,
        label: src.label(),
        entries,
        any_flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_gaussian_has_zero_energy() {
        let family = CutoffFamily::new(0);
        let grid = build_grid(3, 1.0 / 64.0, 8.0).unwrap();
        let data = make_data(
            &DataFamily::Gaussian {
                amp: 0.0,
                width: 1.0,
                center: 0.0,
            },
            &grid,
            &family,
        )
        .unwrap();
        assert_eq!(energy(&data.field), 0.0);
        assert!(data.vstate.v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gaussian_compatibility_n1() {
        let family = CutoffFamily::new(1);
        let grid = build_grid(3, 1.0 / 128.0, 8.0).unwrap();
        let data = make_data(
            &DataFamily::Gaussian {
                amp: 0.5,
                width: 1.0,
                center: 0.0,
            },
            &grid,
            &family,
        )
        .unwrap();
        assert!((data.field.u_at_axis() - PI).abs() < 1e-3);
        // v is the gaussian envelope
        for (j, &r) in data.vstate.grid.nodes().iter().enumerate() {
            assert_relative_eq!(data.vstate.v[j], 0.5 * (-r * r).exp(), max_relative = 1e-10);
        }
    }

    #[test]
    fn ts_data_values() {
        let family = CutoffFamily::new(0);
        let grid = build_grid(3, 1.0 / 128.0, 8.0).unwrap();
        let t_blowup = 1.0;
        let data = make_data(&DataFamily::TsBlowup { t_blowup }, &grid, &family).unwrap();
        // u₀(r = T) = π/2 (arctan 1), well inside the cut
        let j = grid
            .nodes()
            .iter()
            .position(|&r| (r - 1.00390625).abs() < 1e-9)
            .unwrap();
        assert_relative_eq!(
            data.field.u[j],
            2.0 * (grid.node(j) / t_blowup).atan(),
            max_relative = 1e-14
        );
        assert_relative_eq!(ts_exact_u(0.0, 1.0, 1.0), PI / 2.0, max_relative = 1e-15);
        // data vanish identically beyond the cut
        for (j, &r) in grid.nodes().iter().enumerate() {
            if r >= t_blowup + 2.0 {
                assert_eq!(data.field.u[j], 0.0);
                assert_eq!(data.field.ut[j], 0.0);
            }
        }
    }

    #[test]
    fn ts_needs_vacuum_sector_and_room() {
        let f1 = CutoffFamily::new(1);
        let grid = build_grid(3, 1.0 / 32.0, 8.0).unwrap();
        assert!(make_data(&DataFamily::TsBlowup { t_blowup: 1.0 }, &grid, &f1).is_err());
        let f0 = CutoffFamily::new(0);
        let small = build_grid(3, 1.0 / 32.0, 2.0).unwrap();
        assert!(make_data(&DataFamily::TsBlowup { t_blowup: 1.0 }, &small, &f0).is_err());
    }

    #[test]
    fn validator_rejects_bad_exponent() {
        let family = CutoffFamily::new(1);
        let fam = DataFamily::Gaussian {
            amp: 0.3,
            width: 1.0,
            center: 0.0,
        };
        let err = validate_initial_data(&fam, 3.4, 0.25, 8.0, &family, Execution::Sequential);
        assert!(err.is_err());
        let msg = format!("{}", err.unwrap_err());
        assert!(msg.contains("7/2 < s < 18/5"), "message was: {msg}");
    }

    #[test]
    fn validator_vacuum_is_all_zero() {
        let family = CutoffFamily::new(0);
        let fam = DataFamily::Gaussian {
            amp: 0.0,
            width: 1.0,
            center: 0.0,
        };
        let rep =
            validate_initial_data(&fam, 3.55, 1.0 / 16.0, 6.0, &family, Execution::Sequential)
                .unwrap();
        for e in &rep.entries {
            assert_eq!(e.coarse, 0.0, "{} nonzero", e.name);
            assert!(!e.flagged);
        }
    }
}
