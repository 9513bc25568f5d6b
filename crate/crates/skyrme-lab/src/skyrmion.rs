//! Static skyrmion profiles by shooting.
//!
//! The static equation (the u-equation with ∂_t ≡ 0) reads
//!
//!   u_rr = [−(2/r)u_r + (sin 2u/r²)(1 − u_r² + sin²u/r²)] / (1 + 2sin²u/r²).
//!
//! Charge −1 profiles leave the axis as u = π + b·r + c₃·r³ + O(r⁵) with
//! c₃ = −b³(2+b²)/(15(1+2b²)) (from the Frobenius expansion of the ODE) and
//! must decay to 0 at infinity; the tail is algebraic, u ~ C/r². Shooting
//! classifies a slope b as overshoot (u crosses 0) or undershoot (u turns
//! around while positive), and bisection pins the separating slope b*.

use crate::diagnostics::{static_energy, virial_decompose};
use crate::error::{LabError, Result};
use crate::grid::RadialGrid;
use crate::stencil::{deriv1_at, deriv2_at, pad, AxisParity};
use std::f64::consts::PI;

/// u_rr from the static equation.
pub fn static_rhs(r: f64, u: f64, ur: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!(
            "static_rhs requires r > 0, got {r}"
        )));
    }
    Ok(static_rhs_raw(r, u, ur))
}

#[inline]
fn static_rhs_raw(r: f64, u: f64, ur: f64) -> f64 {
    let (s, c) = u.sin_cos();
    let s2 = s * s;
    let r2 = r * r;
    let a = 1.0 + 2.0 * s2 / r2;
    (-2.0 / r * ur + (2.0 * s * c / r2) * (1.0 - ur * ur + s2 / r2)) / a
}

/// Cubic coefficient of the axis series u = π + b r + c₃ r³ + O(r⁵).
pub fn axis_series_cubic(b: f64) -> f64 {
    -b * b * b * (2.0 + b * b) / (15.0 * (1.0 + 2.0 * b * b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShotOutcome {
    /// u crossed zero at radius r.
    Overshoot { r: f64 },
    /// u_r turned positive while u > 0 at radius r (or u never decayed).
    Undershoot { r: f64 },
    /// reached r_end with u(r_end) ≤ tol and no event.
    Converged { u_end: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct ShootParams {
    /// series-start radius
    pub r0: f64,
    /// integration horizon; events for wrong slopes fire long before
    pub r_end: f64,
    /// far-field smallness defining "converged"
    pub tol: f64,
}

impl Default for ShootParams {
    fn default() -> Self {
        ShootParams {
            r0: 2.0f64.powi(-12),
            r_end: 25.0,
            tol: 1e-6,
        }
    }
}

// Cash–Karp 4(5) embedded pair.
const CK_A: [[f64; 5]; 5] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0, 0.0, 0.0],
    [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0, 0.0],
    [
        1631.0 / 55296.0,
        175.0 / 512.0,
        575.0 / 13824.0,
        44275.0 / 110592.0,
        253.0 / 4096.0,
    ],
];
const CK_B5: [f64; 6] = [
    37.0 / 378.0,
    0.0,
    250.0 / 621.0,
    125.0 / 594.0,
    0.0,
    512.0 / 1771.0,
];
const CK_B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
];

fn ck_step(r: f64, y: [f64; 2], h: f64) -> ([f64; 2], f64) {
    let f = |r: f64, y: [f64; 2]| [y[1], static_rhs_raw(r, y[0], y[1])];
    let k1 = f(r, y);
    let mut ks = [k1, [0.0; 2], [0.0; 2], [0.0; 2], [0.0; 2], [0.0; 2]];
    let nodes = [0.2, 0.3, 0.6, 1.0, 7.0 / 8.0];
    for i in 0..5 {
        let mut yy = y;
        for (m, coef) in CK_A[i].iter().enumerate().take(i + 1) {
            yy[0] += h * coef * ks[m][0];
            yy[1] += h * coef * ks[m][1];
        }
        ks[i + 1] = f(r + nodes[i] * h, yy);
    }
    let mut y5 = y;
    let mut y4 = y;
    for m in 0..6 {
        y5[0] += h * CK_B5[m] * ks[m][0];
        y5[1] += h * CK_B5[m] * ks[m][1];
        y4[0] += h * CK_B4[m] * ks[m][0];
        y4[1] += h * CK_B4[m] * ks[m][1];
    }
    let err = ((y5[0] - y4[0]).abs()).max((y5[1] - y4[1]).abs());
    (y5, err)
}

/// Integrate the static equation with slope `b` and classify the outcome.
pub fn shoot(b: f64, params: &ShootParams) -> Result<ShotOutcome> {
    let c3 = axis_series_cubic(b);
    let r0 = params.r0;
    let mut r = r0;
    let mut y = [PI + b * r0 + c3 * r0 * r0 * r0, b + 3.0 * c3 * r0 * r0];
    let mut h = r0;
    let tol = 1e-12;
    while r < params.r_end {
        if h < 1e-14 * r.max(1.0) {
            return Err(LabError::Data(format!(
                "step-size underflow at r = {r} (b = {b})"
            )));
        }
        h = h.min(params.r_end - r);
        let (ynew, err) = ck_step(r, y, h);
        let scale = tol * (1.0 + y[0].abs().max(y[1].abs()));
        if err > scale {
            h *= 0.9 * (scale / err).powf(0.25).max(0.1);
            continue;
        }
        r += h;
        y = ynew;
        if err > 0.0 {
            h *= (0.9 * (scale / err).powf(0.2)).min(5.0);
        } else {
            h *= 5.0;
        }
        if y[0] < 0.0 {
            return Ok(ShotOutcome::Overshoot { r });
        }
        if y[1] > 0.0 && y[0] > 0.0 {
            return Ok(ShotOutcome::Undershoot { r });
        }
    }
    if y[0] <= params.tol {
        Ok(ShotOutcome::Converged { u_end: y[0] })
    } else {
        Ok(ShotOutcome::Undershoot { r })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SkyrmionSolve {
    pub b_star: f64,
    pub bracket_width: f64,
    pub iterations: usize,
}

/// Bisect the shooting slope between an overshooting `b_lo` and an
/// undershooting `b_hi` until the bracket is narrower than `width_tol`.
pub fn find_skyrmion(
    params: &ShootParams,
    b_lo: f64,
    b_hi: f64,
    width_tol: f64,
) -> Result<SkyrmionSolve> {
    let mut lo = b_lo;
    let mut hi = b_hi;
    match shoot(lo, params)? {
        ShotOutcome::Overshoot { .. } => {}
        other => {
            return Err(LabError::Data(format!(
                "b_lo = {lo} does not overshoot: {other:?}"
            )));
        }
    }
    if matches!(shoot(hi, params)?, ShotOutcome::Overshoot { .. }) {
        return Err(LabError::Data(format!(
            "b_hi = {hi} overshoots; bracket invalid"
        )));
    }
    let mut iterations = 0;
    while hi - lo > width_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // machine-precision bracket
        }
        match shoot(mid, params)? {
            ShotOutcome::Overshoot { .. } => lo = mid,
            _ => hi = mid,
        }
        iterations += 1;
    }
    Ok(SkyrmionSolve {
        b_star: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        iterations,
    })
}

/// A converged static profile sampled on (and beyond) an evolution grid.
#[derive(Debug, Clone)]
pub struct StaticProfile {
    /// shooting slope at the axis
    pub b: f64,
    /// the evolution grid (dim 3); `u`/`ur` are its samples
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub ur: Vec<f64>,
    /// samples on the extended mesh [0, ext_r_max] (same spacing); the
    /// first `grid.n_cells()` entries coincide with `u`/`ur`
    pub ext_u: Vec<f64>,
    pub ext_ur: Vec<f64>,
    pub ext_r_max: f64,
    /// profile values at the two outer ghost radii of the evolution grid
    pub outer_ghost_u: [f64; 2],
    pub ode_residual: f64,
    pub e2: f64,
    pub e4: f64,
    pub energy: f64,
}

/// Sample the profile with slope `b` onto `grid` by fixed-step RK4 through
/// the cell centers, extending to `ext_r_max` for quadratures and ghosts.
pub fn profile_on_grid(b: f64, grid: &RadialGrid, ext_r_max: f64) -> Result<StaticProfile> {
    if grid.dim() != 3 {
        return Err(LabError::Config(
            "static profiles live on a dim-3 grid".into(),
        ));
    }
    let dr = grid.dr();
    let n_ext = (ext_r_max / dr).round() as usize;
    if n_ext < grid.n_cells() + 2 {
        return Err(LabError::Config(
            "extension must cover the outer ghost radii".into(),
        ));
    }
    let f = |r: f64, y: [f64; 2]| [y[1], static_rhs_raw(r, y[0], y[1])];
    let rk4 = |r: f64, y: [f64; 2], h: f64| {
        let k1 = f(r, y);
        let k2 = f(
            r + 0.5 * h,
            [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
        );
        let k3 = f(
            r + 0.5 * h,
            [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
        );
        let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };
    // series start at the first cell center, then 16 substeps per cell
    let r0 = 0.5 * dr;
    let c3 = axis_series_cubic(b);
    let mut y = [PI + b * r0 + c3 * r0 * r0 * r0, b + 3.0 * c3 * r0 * r0];
    let mut ext_u = Vec::with_capacity(n_ext);
    let mut ext_ur = Vec::with_capacity(n_ext);
    ext_u.push(y[0]);
    ext_ur.push(y[1]);
    let sub = 16;
    let h = dr / sub as f64;
    let mut r = r0;
    for _ in 1..n_ext {
        for _ in 0..sub {
            y = rk4(r, y, h);
            r += h;
        }
        ext_u.push(y[0]);
        ext_ur.push(y[1]);
    }
    let n = grid.n_cells();
    let u = ext_u[..n].to_vec();
    let ur = ext_ur[..n].to_vec();
    let outer_ghost_u = [ext_u[n], ext_u[n + 1]];

    // discrete residual of the static equation on the evolution grid
    let p = pad(&u, AxisParity::OddAbout(PI), outer_ghost_u);
    let mut ode_residual = 0.0f64;
    for (j, &uj) in u.iter().enumerate() {
        let r = grid.node(j);
        let urr = deriv2_at(&p, j, dr);
        let ur_d = deriv1_at(&p, j, dr);
        ode_residual = ode_residual.max((urr - static_rhs_raw(r, uj, ur_d)).abs());
    }

    let (e2, e4) = virial_decompose(&ext_u, &ext_ur, dr);
    let energy = static_energy(&ext_u, &ext_ur, dr);
    Ok(StaticProfile {
        b,
        grid: grid.clone(),
        u,
        ur,
        ext_u,
        ext_ur,
        ext_r_max,
        outer_ghost_u,
        ode_residual,
        e2,
        e4,
        energy,
    })
}
