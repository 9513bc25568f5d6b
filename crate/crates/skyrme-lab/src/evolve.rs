//! Method-of-lines time evolution: classical RK4 over the 4th-order
//! spatial discretization, with parity ghost cells at the axis and
//! fixed-value ghost cells beyond r_max.
//!
//! Three systems share the machinery:
//! * `Skyrme`   — v_tt = Δ₅v + rhs_v (the regularized quasilinear flow);
//! * `Sigma`    — u_tt = Δ₃u − sin(2u)/r² (the semilinear contrast case);
//! * `FreeWave` — v_tt = Δ₅v (scheme calibration).
//!
//! The outer ghost cells hold the initial data's own extension (identically
//! zero for every compact family, the ODE profile values for skyrmion
//! runs), so compact perturbations see an exact boundary for as long as
//! finite propagation speed keeps them away from r_max.

use crate::config::SimConfig;
use crate::cutoff::{CutoffFamily, CutoffTable};
use crate::diagnostics::{
    continuation_quantity_with, decay_a_monitor, decay_phi_monitor, decay_v_monitor, energy,
    energy_sigma, topological_charge, DiagnosticsRecord,
};
use crate::dynamics::rhs_v_node;
use crate::error::{LabError, Result};
use crate::exec::{fill_range, Execution};
use crate::grid::{build_grid, RadialGrid};
use crate::scenarios::{make_data, InitialData};
use crate::series::SnapshotData;
use crate::sobolev::{
    decay_warning, l2_norm_radial, norm_from_spectrum, radial_spectrum_dense, KGrid,
};
use crate::state::{u_from_v, FieldState, VState};
use crate::stencil::{deriv1_at, deriv2_at, gradient, pad, AxisParity};
use crate::transforms::{tilde_a_raw, PhiContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Skyrme,
    Sigma,
    FreeWave,
}

impl Mode {
    /// Ambient dimension of the evolved field (v lives in 5, u in 3).
    pub fn dim(&self) -> u32 {
        match self {
            Mode::Sigma => 3,
            _ => 5,
        }
    }
}

/// Time-integration parameters: dt = cfl·dr, RK4, 4th-order stencils.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub cfl: f64,
    pub dt: f64,
}

impl Integrator {
    pub fn new(cfl: f64, dr: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 0.5) {
            return Err(LabError::Config(format!(
                "cfl must lie in (0, 1/2], got {cfl}"
            )));
        }
        Ok(Integrator { cfl, dt: cfl * dr })
    }
}

/// The evolved pair (y, y_t) at time t; y is v or u depending on the mode.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub y: Vec<f64>,
    pub yt: Vec<f64>,
}

pub struct Evolver<'f> {
    pub mode: Mode,
    pub grid: RadialGrid,
    pub family: &'f CutoffFamily,
    pub exec: Execution,
    pub r_switch: f64,
    pub outer_y: [f64; 2],
    pub outer_yt: [f64; 2],
    table: CutoffTable,
    parity: AxisParity,
}

impl<'f> Evolver<'f> {
    pub fn new(
        mode: Mode,
        grid: RadialGrid,
        family: &'f CutoffFamily,
        exec: Execution,
        outer_y: [f64; 2],
        outer_yt: [f64; 2],
    ) -> Result<Self> {
        if grid.dim() != mode.dim() {
            return Err(LabError::Config(format!(
                "mode needs a dim-{} grid, got dim-{}",
                mode.dim(),
                grid.dim()
            )));
        }
        if mode == Mode::Sigma && family.n1() != 0 {
            return Err(LabError::Config(
                "the sigma flow evolves the N₁ = 0 sector".into(),
            ));
        }
        let table = CutoffTable::new(&grid, family);
        let parity = match mode {
            Mode::Sigma => AxisParity::OddAbout(0.0),
            _ => AxisParity::Even,
        };
        Ok(Evolver {
            mode,
            grid,
            family,
            exec,
            r_switch: crate::dynamics::DEFAULT_R_SWITCH,
            outer_y,
            outer_yt,
            table,
            parity,
        })
    }

    /// y_tt at every node for the current mode.
    pub fn accel(&self, y: &[f64], yt: &[f64]) -> Vec<f64> {
        let p = pad(y, self.parity, self.outer_y);
        let dr = self.grid.dr();
        let nodes = self.grid.nodes();
        let mut out = vec![0.0; y.len()];
        match self.mode {
            Mode::FreeWave => {
                fill_range(self.exec, &mut out, |j| {
                    deriv2_at(&p, j, dr) + 4.0 / nodes[j] * deriv1_at(&p, j, dr)
                });
            }
            Mode::Sigma => {
                fill_range(self.exec, &mut out, |j| {
                    deriv2_at(&p, j, dr)
                        + 2.0 / nodes[j] * deriv1_at(&p, j, dr)
                        + crate::dynamics::rhs_sigma_raw(nodes[j], y[j])
                });
            }
            Mode::Skyrme => {
                let table = &self.table;
                let rs = self.r_switch;
                fill_range(self.exec, &mut out, |j| {
                    let r = nodes[j];
                    let d1 = deriv1_at(&p, j, dr);
                    deriv2_at(&p, j, dr)
                        + 4.0 / r * d1
                        + rhs_v_node(
                            r,
                            y[j],
                            yt[j],
                            d1,
                            table.phi[j],
                            table.phi_r[j],
                            table.lap3_phi[j],
                            table.lt1[j],
                            table.gt1[j],
                            rs,
                        )
                });
            }
        }
        out
    }

    /// One classical RK4 step of size `dt`.
    pub fn step(&self, state: &SimState, dt: f64) -> Result<SimState> {
        let n = state.y.len();
        let lin = |a: &[f64], b: &[f64], c: f64| -> Vec<f64> {
            (0..n).map(|j| a[j] + c * b[j]).collect()
        };
        let a1 = self.accel(&state.y, &state.yt);
        let y1 = lin(&state.y, &state.yt, 0.5 * dt);
        let yt1 = lin(&state.yt, &a1, 0.5 * dt);
        let a2 = self.accel(&y1, &yt1);
        let y2 = lin(&state.y, &yt1, 0.5 * dt);
        let yt2 = lin(&state.yt, &a2, 0.5 * dt);
        let a3 = self.accel(&y2, &yt2);
        let y3 = lin(&state.y, &yt2, dt);
        let yt3 = lin(&state.yt, &a3, dt);
        let a4 = self.accel(&y3, &yt3);
        let sixth = dt / 6.0;
        let mut y = Vec::with_capacity(n);
        let mut yt = Vec::with_capacity(n);
        for j in 0..n {
            y.push(state.y[j] + sixth * (state.yt[j] + 2.0 * (yt1[j] + yt2[j]) + yt3[j]));
            yt.push(state.yt[j] + sixth * (a1[j] + 2.0 * (a2[j] + a3[j]) + a4[j]));
        }
        let t = state.t + dt;
        for j in 0..n {
            if !(y[j].is_finite() && yt[j].is_finite()) {
                return Err(LabError::Instability {
                    t,
                    node: j,
                    r: self.grid.node(j),
                });
            }
        }
        Ok(SimState { t, y, yt })
    }

    /// y_ttt by a 4th-order centered time difference of the acceleration
    /// over micro-steps of δ = dr/8; states at t < 0 come from
    /// time-reversal (negate y_t, evolve forward, negate back).
    pub fn third_time_derivative(&self, state: &SimState) -> Result<Vec<f64>> {
        let delta = self.grid.dr() / 8.0;
        let fwd1 = self.step(state, delta)?;
        let fwd2 = self.step(&fwd1, delta)?;
        let reversed = SimState {
            t: state.t,
            y: state.y.clone(),
            yt: state.yt.iter().map(|x| -x).collect(),
        };
        let bwd1r = self.step(&reversed, delta)?;
        let bwd2r = self.step(&bwd1r, delta)?;
        let unreverse = |s: &SimState| SimState {
            t: s.t,
            y: s.y.clone(),
            yt: s.yt.iter().map(|x| -x).collect(),
        };
        let bwd1 = unreverse(&bwd1r);
        let bwd2 = unreverse(&bwd2r);
        let a_p1 = self.accel(&fwd1.y, &fwd1.yt);
        let a_p2 = self.accel(&fwd2.y, &fwd2.yt);
        let a_m1 = self.accel(&bwd1.y, &bwd1.yt);
        let a_m2 = self.accel(&bwd2.y, &bwd2.yt);
        Ok((0..state.y.len())
            .map(|j| (-a_p2[j] + 8.0 * a_p1[j] - 8.0 * a_m1[j] + a_m2[j]) / (12.0 * delta))
            .collect())
    }

    /// The v-representation of the state (identity for v-modes, u/r for σ).
    pub fn vstate_of(&self, state: &SimState) -> Result<VState> {
        match self.mode {
            Mode::Sigma => {
                let grid5 = self.grid.with_dim(5)?;
                let nodes = grid5.nodes().to_vec();
                let v = state.y.iter().zip(&nodes).map(|(&u, &r)| u / r).collect();
                let vt = state
                    .yt
                    .iter()
                    .zip(&nodes)
                    .map(|(&ut, &r)| ut / r)
                    .collect();
                VState::new(state.t, grid5, v, vt)
            }
            _ => VState::new(
                state.t,
                self.grid.clone(),
                state.y.clone(),
                state.yt.clone(),
            ),
        }
    }

    /// The u-representation of the state.
    pub fn fieldstate_of(&self, state: &SimState) -> Result<FieldState> {
        match self.mode {
            Mode::Sigma => FieldState::new(
                state.t,
                self.grid.with_dim(3)?,
                state.y.clone(),
                state.yt.clone(),
            ),
            _ => u_from_v(&self.vstate_of(state)?, self.family),
        }
    }

    /// Outer ghost values in the v-representation.
    pub fn outer_v_ghosts(&self) -> ([f64; 2], [f64; 2]) {
        let g0 = self.grid.r_max() + 0.5 * self.grid.dr();
        let g1 = self.grid.r_max() + 1.5 * self.grid.dr();
        match self.mode {
            Mode::Sigma => (
                [self.outer_y[0] / g0, self.outer_y[1] / g1],
                [self.outer_yt[0] / g0, self.outer_yt[1] / g1],
            ),
            _ => (self.outer_y, self.outer_yt),
        }
    }
}

/// Extent and taper of the auxiliary grid carrying the static part of Φ.
const STATIC_EXTENT: f64 = 192.0;
const STATIC_TAPER_START: f64 = 96.0;

/// Everything needed to turn a [`SimState`] into a [`DiagnosticsRecord`].
pub struct RecordEngine<'f> {
    pub s: f64,
    pub ctx: PhiContext<'f>,
    kgrid: KGrid,
    /// spectrum of the tapered static correction (K − c₁), when present
    static_spectrum: Option<Vec<f64>>,
}

impl<'f> RecordEngine<'f> {
    pub fn new(
        grid5: &RadialGrid,
        family: &'f CutoffFamily,
        s: f64,
        exec: Execution,
    ) -> Result<Self> {
        let ctx = PhiContext::new(grid5, family, exec)?;
        let kgrid = KGrid::for_grid(grid5);
        let static_spectrum = if family.n1() > 0 {
            let corr = crate::transforms::Corrections::new(family);
            // extent is an integer multiple of r_max, so the extended grid's
            // dense k-nodes contain the run grid's nodes exactly
            let stride = (STATIC_EXTENT / grid5.r_max()).ceil().max(2.0) as usize;
            let extent = grid5.r_max() * stride as f64;
            let taper_start = STATIC_TAPER_START.clamp(grid5.r_max(), 0.5 * extent);
            let ext = build_grid(5, grid5.dr(), extent)?;
            let n = ext.n_cells();
            let vals = crate::exec::map_range(exec, n, |j| {
                let r = ext.node(j);
                if r <= 0.5 {
                    return 0.0;
                }
                let taper = crate::cutoff::smoothstep01((extent - r) / (extent - taper_start));
                if taper == 0.0 {
                    return 0.0;
                }
                taper * corr.c_full_at(r).unwrap_or(f64::NAN)
            });
            if vals.iter().any(|x| !x.is_finite()) {
                return Err(LabError::Quadrature {
                    node: 0,
                    r: 0.0,
                    estimate: f64::NAN,
                });
            }
            let dense_ext = radial_spectrum_dense(&vals, &ext);
            Some(
                (1..=grid5.n_cells())
                    .map(|m| dense_ext[m * stride - 1])
                    .collect(),
            )
        } else {
            None
        };
        Ok(RecordEngine {
            s,
            ctx,
            kgrid,
            static_spectrum,
        })
    }

    pub fn record(&self, evolver: &Evolver, state: &SimState) -> Result<DiagnosticsRecord> {
        let exec = evolver.exec;
        let vs = evolver.vstate_of(state)?;
        let fs = evolver.fieldstate_of(state)?;
        let grid5 = &vs.grid;
        let nodes = grid5.nodes();

        let energy_val = match evolver.mode {
            Mode::Sigma => energy_sigma(&fs),
            _ => energy(&fs),
        };
        let charge = topological_charge(&fs)?;
        let (outer_v, outer_vt) = evolver.outer_v_ghosts();
        let cont = continuation_quantity_with(&vs, outer_v);

        // accelerations in the v-representation
        let acc = evolver.accel(&state.y, &state.yt);
        let acc3 = evolver.third_time_derivative(state)?;
        let (vtt, vttt): (Vec<f64>, Vec<f64>) = match evolver.mode {
            Mode::Sigma => (
                acc.iter().zip(nodes).map(|(&a, &r)| a / r).collect(),
                acc3.iter().zip(nodes).map(|(&a, &r)| a / r).collect(),
            ),
            _ => (acc, acc3),
        };

        let phi_dyn = self.ctx.phi_dynamic(&vs, exec)?;
        let phi: Vec<f64> = phi_dyn
            .iter()
            .zip(&self.ctx.table.c_full)
            .map(|(&g, &c)| g + c)
            .collect();
        let phi_t = self.ctx.phi_t_from_state(&vs)?;
        let phi_tt = self.ctx.phi_tt_from_state(&vs, &vtt)?;
        let phi_ttt = self.ctx.phi_ttt_from_state(&vs, &vtt, &vttt)?;

        let decay_v = decay_v_monitor(&vs);
        let decay_phi = decay_phi_monitor(&phi, nodes);
        let decay_a = decay_a_monitor(&vs, evolver.family);

        let res_phi = residual_box_phi_with(&self.ctx, &vs, &phi, &phi_tt, outer_v, exec)?;
        let res_phit =
            residual_box_phit_with(&self.ctx, &vs, &phi_t, &phi_ttt, outer_v, outer_vt, exec)?;

        // spectra: compact dynamic part on the run grid, static part cached
        let mut spec_phi = radial_spectrum_dense(&phi_dyn, grid5);
        if let Some(stat) = &self.static_spectrum {
            for (a, b) in spec_phi.iter_mut().zip(stat) {
                *a += b;
            }
        }
        let spec_phit = radial_spectrum_dense(&phi_t, grid5);
        let hs_phi = norm_from_spectrum(&spec_phi, &self.kgrid, 0.0, 5)
            + norm_from_spectrum(&spec_phi, &self.kgrid, self.s, 5);
        let hsm1_phit = norm_from_spectrum(&spec_phit, &self.kgrid, 0.0, 5)
            + norm_from_spectrum(&spec_phit, &self.kgrid, self.s - 1.0, 5);
        let l2_phitt = l2_norm_radial(&phi_tt, grid5);
        let l2_phittt = l2_norm_radial(&phi_ttt, grid5);

        Ok(DiagnosticsRecord {
            t: state.t,
            energy: energy_val,
            charge,
            cont,
            decay_v,
            decay_phi,
            decay_a,
            res_phi,
            res_phit,
            hs_phi,
            hsm1_phit,
            l2_phitt,
            l2_phittt,
            decay_warning: decay_warning(&phi_dyn) || decay_warning(&phi_t),
        })
    }

    pub fn snapshot(&self, evolver: &Evolver, state: &SimState) -> Result<SnapshotData> {
        let vs = evolver.vstate_of(state)?;
        let fs = evolver.fieldstate_of(state)?;
        let phi = self.ctx.phi_from_v(&vs, evolver.exec)?;
        let phit = self.ctx.phi_t_from_state(&vs)?;
        Ok(SnapshotData {
            t: state.t,
            r: vs.grid.nodes().to_vec(),
            u: fs.u,
            ut: fs.ut,
            v: vs.v,
            vt: vs.vt,
            phi,
            phit,
        })
    }
}

pub(crate) fn residual_box_phi_with(
    ctx: &PhiContext,
    state: &VState,
    phi: &[f64],
    phi_tt: &[f64],
    outer_v: [f64; 2],
    exec: Execution,
) -> Result<f64> {
    let grid = &state.grid;
    let rhs = ctx.box_phi_rhs_with(state, phi, exec)?;
    let g0 = grid.r_max() + 0.5 * grid.dr();
    let g1 = grid.r_max() + 1.5 * grid.dr();
    let ghosts = [
        ctx.phi_value(g0, outer_v[0])?,
        ctx.phi_value(g1, outer_v[1])?,
    ];
    let lap = crate::stencil::laplacian(phi, grid, AxisParity::Even, ghosts, exec);
    let resid: Vec<f64> = (0..grid.n_cells())
        .map(|j| phi_tt[j] - lap[j] - rhs[j])
        .collect();
    Ok(l2_norm_radial(&resid, grid))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn residual_box_phit_with(
    ctx: &PhiContext,
    state: &VState,
    phi_t: &[f64],
    phi_ttt: &[f64],
    outer_v: [f64; 2],
    outer_vt: [f64; 2],
    exec: Execution,
) -> Result<f64> {
    let grid = &state.grid;
    let rhs = ctx.box_phit_rhs(state)?;
    let g0 = grid.r_max() + 0.5 * grid.dr();
    let g1 = grid.r_max() + 1.5 * grid.dr();
    let ghosts = [
        tilde_a_raw(g0, outer_v[0], ctx.family).sqrt() * outer_vt[0],
        tilde_a_raw(g1, outer_v[1], ctx.family).sqrt() * outer_vt[1],
    ];
    let lap = crate::stencil::laplacian(phi_t, grid, AxisParity::Even, ghosts, exec);
    let resid: Vec<f64> = (0..grid.n_cells())
        .map(|j| phi_ttt[j] - lap[j] - rhs[j])
        .collect();
    Ok(l2_norm_radial(&resid, grid))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BlowUpDetected,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub status: RunStatus,
    pub records: usize,
    pub final_t: f64,
    /// detection time when status is BlowUpDetected
    pub detection: Option<f64>,
}

pub trait RunSink {
    fn on_record(&mut self, rec: &DiagnosticsRecord) -> Result<()>;
    fn on_snapshot(&mut self, label: &str, snap: &SnapshotData) -> Result<()>;
}

/// Sink that drops everything.
pub struct NullSink;
impl RunSink for NullSink {
    fn on_record(&mut self, _: &DiagnosticsRecord) -> Result<()> {
        Ok(())
    }
    fn on_snapshot(&mut self, _: &str, _: &SnapshotData) -> Result<()> {
        Ok(())
    }
}

/// Sink that collects records and snapshots in memory.
#[derive(Default)]
pub struct MemorySink {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<(String, SnapshotData)>,
}
impl RunSink for MemorySink {
    fn on_record(&mut self, rec: &DiagnosticsRecord) -> Result<()> {
        self.records.push(rec.clone());
        Ok(())
    }
    fn on_snapshot(&mut self, label: &str, snap: &SnapshotData) -> Result<()> {
        self.snapshots.push((label.to_string(), snap.clone()));
        Ok(())
    }
}

/// Growth factor of the blow-up detectors relative to their t = 0 baseline.
const DETECTION_GROWTH: f64 = 100.0;

/// Evolve a configured run to t_end (or detection/instability), emitting a
/// diagnostics record every `monitor_every` steps and snapshots every
/// `snapshot_every` steps (plus the final state).
pub fn run(config: &SimConfig, exec: Execution, sink: &mut dyn RunSink) -> Result<RunSummary> {
    config.validate()?;
    let mode = config.mode;
    let family = CutoffFamily::new(if mode == Mode::Sigma { 0 } else { config.n1 });
    let grid3 = build_grid(3, config.dr, config.r_max)?;
    let data: InitialData = make_data(&config.data, &grid3, &family)?;

    let grid = match mode {
        Mode::Sigma => grid3.clone(),
        _ => grid3.with_dim(5)?,
    };
    let g0 = grid.r_max() + 0.5 * grid.dr();
    let g1 = grid.r_max() + 1.5 * grid.dr();
    let (state0, outer_y, outer_yt) = match mode {
        Mode::Sigma => (
            SimState {
                t: 0.0,
                y: data.field.u.clone(),
                yt: data.field.ut.clone(),
            },
            data.outer_u,
            data.outer_ut,
        ),
        _ => (
            SimState {
                t: 0.0,
                y: data.vstate.v.clone(),
                yt: data.vstate.vt.clone(),
            },
            [
                (data.outer_u[0] - family.phi(g0)) / g0,
                (data.outer_u[1] - family.phi(g1)) / g1,
            ],
            [data.outer_ut[0] / g0, data.outer_ut[1] / g1],
        ),
    };
    let evolver = Evolver::new(mode, grid.clone(), &family, exec, outer_y, outer_yt)?;
    let grid5 = match mode {
        Mode::Sigma => grid.with_dim(5)?,
        _ => grid.clone(),
    };
    let engine = RecordEngine::new(&grid5, &family, config.s, exec)?;

    let integrator = Integrator::new(config.cfl, config.dr)?;
    let dt = integrator.dt;
    let n_steps = (config.t_end / dt).round().max(1.0) as usize;

    // blow-up detector baselines
    let sup_ur = |st: &SimState| -> f64 {
        let gr = gradient(&st.y, &grid, evolver_parity(mode), outer_y, exec);
        gr.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    };
    let baseline = match mode {
        Mode::Sigma => sup_ur(&state0),
        _ => continuation_quantity_with(&evolver.vstate_of(&state0)?, evolver.outer_v_ghosts().0)
            .max(1.0),
    };

    let rec0 = engine.record(&evolver, &state0)?;
    sink.on_record(&rec0)?;
    let mut records = 1usize;

    let mut state = state0;
    let mut detection: Option<f64> = None;
    for i in 1..=n_steps {
        state = evolver.step(&state, dt)?;
        state.t = i as f64 * dt;

        // σ-mode checks its detector every step; the Skyrme flow only at
        // monitor cadence (its detector is the continuation quantity).
        if mode == Mode::Sigma && sup_ur(&state) >= DETECTION_GROWTH * baseline {
            detection = Some(state.t);
        }
        let monitor_now = i % config.monitor_every == 0 || i == n_steps || detection.is_some();
        if monitor_now {
            let rec = engine.record(&evolver, &state)?;
            if mode != Mode::Sigma && rec.cont >= DETECTION_GROWTH * baseline {
                detection = Some(state.t);
            }
            sink.on_record(&rec)?;
            records += 1;
        }
        if config.snapshot_every > 0 && i % config.snapshot_every == 0 {
            sink.on_snapshot(&format!("step{i:08}"), &engine.snapshot(&evolver, &state)?)?;
        }
        if detection.is_some() {
            break;
        }
    }
    sink.on_snapshot("final", &engine.snapshot(&evolver, &state)?)?;
    Ok(RunSummary {
        status: if detection.is_some() {
            RunStatus::BlowUpDetected
        } else {
            RunStatus::Completed
        },
        records,
        final_t: state.t,
        detection,
    })
}

fn evolver_parity(mode: Mode) -> AxisParity {
    match mode {
        Mode::Sigma => AxisParity::OddAbout(0.0),
        _ => AxisParity::Even,
    }
}

/// Restrict a half-offset fine field (spacing dr/2) to the coarse nodes
/// (spacing dr) by 6-point symmetric interpolation; fields are mirrored
/// evenly at the axis and treated as vacuum beyond the outer edge.
pub fn restrict_half_offset(fine: &[f64]) -> Vec<f64> {
    let w = [
        3.0 / 256.0,
        -25.0 / 256.0,
        150.0 / 256.0,
        150.0 / 256.0,
        -25.0 / 256.0,
        3.0 / 256.0,
    ];
    let nf = fine.len() as isize;
    let sample = |i: isize| -> f64 {
        if i < 0 {
            fine[(-i - 1) as usize]
        } else if i >= nf {
            0.0
        } else {
            fine[i as usize]
        }
    };
    (0..fine.len() / 2)
        .map(|j| {
            let base = 2 * j as isize;
            (0..6).map(|m| w[m] * sample(base + m as isize - 2)).sum()
        })
        .collect()
}
