//! Right-hand sides of the three equations of motion.
//!
//! * `rhs_u` — the quasilinear u-equation written as □₃u = N(r, u, ∇u);
//! * `rhs_sigma` — the semilinear σ-model source −sin(2u)/r²;
//! * `rhs_v` — the full right-hand side of the v-equation, □₅v =
//!   (1/r)Δ₃φ + (1/r)φ_{>1}N(r, rv+φ, ∇(rv+φ)) + (2/r²)φ_{>1}v +
//!   φ_{<1}[(1/r)N(r, rv, ∇(rv)) + (2/r²)v], whose bracketed near-axis
//!   combination is `rhs_v_inner`.
//!
//! `rhs_v_inner` is the delicate part: written naively it is
//! (2v/(r²D))·B with B(r→0) = 0 by a three-way cancellation. For
//! r < r_switch it is evaluated through the exact factorization
//!
//!   B = r²·[ v²α(x) + sc(2x)(v_r² − v_t²) + sc(2x)v⁴δ(x)(1+sc(x))
//!            + r v³v_r (λ(x) + sc(2x)δ(x)) ],      x = rv,
//!
//! with α, δ, λ entire functions of x evaluated by short Taylor series near
//! zero. The factorization reproduces the stated r → 0 limit
//! (2v³/3)(2+v²)/(1+2v²) and agrees with the direct branch to round-off
//! across the seam.

use crate::cutoff::CutoffTable;
use crate::error::{LabError, Result};
use crate::exec::Execution;
use crate::state::VState;
use crate::stencil::{gradient, AxisParity};

/// Default switch radius between the direct and the series-backed branch.
pub const DEFAULT_R_SWITCH: f64 = 1e-2;

/// Which evaluation path produced a sample of the v-equation RHS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Direct,
    NearAxisSeries,
}

#[derive(Debug, Clone, Copy)]
pub struct RhsSample {
    pub value: f64,
    pub branch: Branch,
}

pub mod kernels {
    //! Entire scalar functions of x = rv, with cancellation-free evaluation.

    /// sin(x)/x.
    #[inline]
    pub fn sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            x.sin() / x
        }
    }

    /// α(x) = (1 − sinc(2x))/x², α(0) = 2/3.
    #[inline]
    pub fn alpha(x: f64) -> f64 {
        let x2 = x * x;
        if x.abs() < 0.15 {
            2.0 / 3.0
                + x2 * (-2.0 / 15.0
                    + x2 * (4.0 / 315.0 + x2 * (-2.0 / 2835.0 + x2 * (4.0 / 155925.0))))
        } else {
            (1.0 - sinc(2.0 * x)) / x2
        }
    }

    /// δ(x) = (1 − sinc(x))/x², δ(0) = 1/6.
    #[inline]
    pub fn delta(x: f64) -> f64 {
        let x2 = x * x;
        if x.abs() < 0.3 {
            1.0 / 6.0
                + x2 * (-1.0 / 120.0
                    + x2 * (1.0 / 5040.0 + x2 * (-1.0 / 362880.0 + x2 * (1.0 / 39916800.0))))
        } else {
            (1.0 - sinc(x)) / x2
        }
    }

    /// λ(x) = (sinc(2x)(1 + sinc(x)) − 2 sinc(x)²)/x², λ(0) = −5/6.
    #[inline]
    pub fn lambda(x: f64) -> f64 {
        let x2 = x * x;
        if x.abs() < 0.25 {
            -5.0 / 6.0
                + x2 * (107.0 / 360.0
                    + x2 * (-79.0 / 1680.0
                        + x2 * (8149.0 / 1814400.0
                            + x2 * (-35263.0 / 119750400.0 + x2 * (206117.0 / 14529715200.0)))))
        } else {
            let s = sinc(x);
            (sinc(2.0 * x) * (1.0 + s) - 2.0 * s * s) / x2
        }
    }

}

/// N(r, u, ∇u) of the u-equation □₃u = N.
pub fn rhs_u(r: f64, u: f64, ut: f64, ur: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!("rhs_u requires r > 0, got {r}")));
    }
    Ok(rhs_u_raw(r, u, ut, ur))
}

#[inline]
pub(crate) fn rhs_u_raw(r: f64, u: f64, ut: f64, ur: f64) -> f64 {
    let (s, c) = u.sin_cos();
    let sin2u = 2.0 * s * c;
    let s2 = s * s;
    let r2 = r * r;
    let a = 1.0 + 2.0 * s2 / r2;
    (-(sin2u / r2) * (1.0 + ut * ut - ur * ur + s2 / r2) - 4.0 * s2 * ur / (r2 * r)) / a
}

/// σ-model source: □₃u = −sin(2u)/r².
pub fn rhs_sigma(r: f64, u: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!(
            "rhs_sigma requires r > 0, got {r}"
        )));
    }
    Ok(rhs_sigma_raw(r, u))
}

#[inline]
pub(crate) fn rhs_sigma_raw(r: f64, u: f64) -> f64 {
    -(2.0 * u).sin() / (r * r)
}

/// Direct evaluation of (1/r)N(r, rv, ∇(rv)) + (2/r²)v via the B-bracket.
#[inline]
pub fn inner_direct(r: f64, v: f64, vt: f64, vr: f64) -> f64 {
    let x = r * v;
    let (sx, cx) = x.sin_cos();
    let sc = if x == 0.0 { 1.0 } else { sx / x };
    let sc2 = if x == 0.0 { 1.0 } else { sx * cx / x }; // sin(2x)/(2x)
    let q = v + r * vr;
    let sc_sq = sc * sc;
    let d = 1.0 + 2.0 * v * v * sc_sq;
    let b = 1.0 + 2.0 * v * v * sc_sq
        - sc2 * (1.0 + r * r * vt * vt - q * q + v * v * sc_sq)
        - 2.0 * v * sc_sq * q;
    2.0 * v * b / (r * r * d)
}

/// Series-backed evaluation of the same quantity through the exact
/// factorization of B; stable uniformly down to r → 0.
#[inline]
pub fn inner_series(r: f64, v: f64, vt: f64, vr: f64) -> f64 {
    let x = r * v;
    let (sx, cx) = x.sin_cos();
    let sc = if x == 0.0 { 1.0 } else { sx / x };
    let sc2 = if x == 0.0 { 1.0 } else { sx * cx / x };
    let a = kernels::alpha(x);
    let d = kernels::delta(x);
    let l = kernels::lambda(x);
    let den = 1.0 + 2.0 * v * v * sc * sc;
    let v2 = v * v;
    let bracket = v2 * a
        + sc2 * (vr * vr - vt * vt)
        + sc2 * v2 * v2 * d * (1.0 + sc)
        + r * v2 * v * vr * (l + sc2 * d);
    2.0 * v * bracket / den
}

/// (1/r)N(r, rv, ∇(rv)) + (2/r²)v with the branch dispatched at
/// [`DEFAULT_R_SWITCH`].
pub fn rhs_v_inner(r: f64, v: f64, vt: f64, vr: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!(
            "rhs_v_inner requires r > 0, got {r}"
        )));
    }
    Ok(if r < DEFAULT_R_SWITCH {
        inner_series(r, v, vt, vr)
    } else {
        inner_direct(r, v, vt, vr)
    })
}

/// One node of the full v-equation right-hand side.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn rhs_v_node(
    r: f64,
    v: f64,
    vt: f64,
    vr: f64,
    phi: f64,
    phi_r: f64,
    lap3_phi: f64,
    lt1: f64,
    gt1: f64,
    r_switch: f64,
) -> f64 {
    let mut total = lap3_phi / r;
    if gt1 != 0.0 {
        let u = r * v + phi;
        let n = rhs_u_raw(r, u, r * vt, v + r * vr + phi_r);
        total += gt1 * (n / r + 2.0 * v / (r * r));
    }
    if lt1 != 0.0 {
        let inner = if r < r_switch {
            inner_series(r, v, vt, vr)
        } else {
            inner_direct(r, v, vt, vr)
        };
        total += lt1 * inner;
    }
    total
}

/// Evaluate the v-equation RHS at every node of `state`, recording which
/// branch produced each sample. `v_r` comes from the 4th-order stencil with
/// even axis parity and vacuum outer ghosts.
pub fn rhs_v(
    state: &VState,
    table: &CutoffTable,
    r_switch: f64,
    exec: Execution,
) -> Result<Vec<RhsSample>> {
    if !(r_switch > 0.0 && r_switch <= 0.5) {
        return Err(LabError::Config(format!(
            "r_switch must lie in (0, 1/2], got {r_switch}"
        )));
    }
    let vr = gradient(&state.v, &state.grid, AxisParity::Even, [0.0, 0.0], exec);
    let nodes = state.grid.nodes();
    let mut out = Vec::with_capacity(nodes.len());
    for j in 0..nodes.len() {
        let r = nodes[j];
        let value = rhs_v_node(
            r,
            state.v[j],
            state.vt[j],
            vr[j],
            table.phi[j],
            table.phi_r[j],
            table.lap3_phi[j],
            table.lt1[j],
            table.gt1[j],
            r_switch,
        );
        if !value.is_finite() {
            return Err(LabError::Instability {
                t: state.t,
                node: j,
                r,
            });
        }
        let branch = if r < r_switch && table.lt1[j] != 0.0 {
            Branch::NearAxisSeries
        } else {
            Branch::Direct
        };
        out.push(RhsSample { value, branch });
    }
    Ok(out)
}
