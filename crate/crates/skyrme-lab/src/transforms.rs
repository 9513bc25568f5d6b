//! The Φ transform chain.
//!
//! Φ is built from v by
//!
//!   Φ(t,r) = ∫₀^{v(t,r)} Ã^{1/2}(r,y) dy + C(r),
//!   Ã(r,y) = 1 + 2 sin²(ry + φ(r))/r²,
//!
//! where C(r) = K(r) − c₁(r) collects the two explicit r-only corrections of
//! the construction:
//!
//!   K(r)  = (1/3r)·φ_{>1}(r)·∫₀^{N₁π} {3A^{3/2} + A^{−1/2} − A^{−3/2}}(r,w) dw
//!           (the Φ₂ → Φ step),
//!   c₁(r) = (1/r)·∫_{φ(r)}^{N₁π} A^{1/2}(r,w) dw
//!           (the change of variables w = φ(r) + ry between the u-route and
//!            the v-route),
//!
//! with A(r,w) = 1 + 2 sin²w/r². Both vanish identically for r ≤ 1/2 and for
//! N₁ = 0, and C(r) ~ (4/3)N₁π/r³ at large r. With this bookkeeping the two
//! construction routes
//!
//!   ∫₀^v Ã^{1/2} dy + C(r)   ≡   (1/r)∫_{N₁π}^{u} A^{1/2} dw + K(r)
//!
//! agree exactly at every node, and Φ satisfies
//!
//!   □₅Φ = −(3/2)Φ + (1/2)∫₀^v {3Ã^{3/2} + Ã^{−1/2} − Ã^{−3/2}} dy + C̃(r),
//!   C̃ = (3/2)K − c₂ − Δ₅K,   c₂ = (1/2r)∫_{φ}^{N₁π} {3A^{3/2}+A^{−1/2}−A^{−3/2}} dw,
//!
//! with Δ₅K evaluated analytically (Leibniz rule through the w-quadrature).
//!
//! Time derivatives are local:
//!   Φ_t   = Ã^{1/2} v_t,
//!   Φ_tt  = Ã^{1/2} v_tt + Ã^{−1/2} (sin 2u / r) v_t²,
//!   Φ_ttt = Ã^{1/2} v_ttt + 3Ã^{−1/2}(sin 2u/r) v_tt v_t
//!           + Ã^{−3/2}(2cos 2u − 4 sin⁴u/r²) v_t³,
//! and □₅Φ_t = (Ã − 1)(3/2 + Ã^{−2}/2) Φ_t.

use crate::cutoff::CutoffFamily;
use crate::dynamics::kernels::sinc;
use crate::error::{LabError, Result};
use crate::exec::{map_range, Execution};
use crate::grid::RadialGrid;
use crate::quad::{integrate_default, QuadResult};
use crate::state::VState;

/// Ã(r, y) = 1 + 2 sin²(ry + φ(r))/r², with the cancellation-free form
/// 1 + 2y² sinc²(ry) on the axis plateau.
pub fn tilde_a(r: f64, y: f64, family: &CutoffFamily) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!("tilde_a requires r > 0, got {r}")));
    }
    Ok(tilde_a_raw(r, y, family))
}

#[inline]
pub(crate) fn tilde_a_raw(r: f64, y: f64, family: &CutoffFamily) -> f64 {
    if r < 0.5 {
        // φ ≡ N₁π here and sin²(x + N₁π) = sin²x
        let s = sinc(r * y);
        1.0 + 2.0 * y * y * s * s
    } else {
        let s = (r * y + family.phi(r)).sin();
        1.0 + 2.0 * s * s / (r * r)
    }
}

/// Ã − 1, stable near the axis.
#[inline]
pub(crate) fn a_minus_one(r: f64, y: f64, family: &CutoffFamily) -> f64 {
    if r < 0.5 {
        let s = sinc(r * y);
        2.0 * y * y * s * s
    } else {
        let s = (r * y + family.phi(r)).sin();
        2.0 * s * s / (r * r)
    }
}

/// The quasilinear coefficient Ã(r, y) = 1 + 2sin²(ry + φ(r))/r² as a
/// value object with its analytic partial derivatives.
#[derive(Debug, Clone)]
pub struct ATilde<'f> {
    family: &'f CutoffFamily,
}

impl<'f> ATilde<'f> {
    pub fn new(family: &'f CutoffFamily) -> Self {
        ATilde { family }
    }

    pub fn eval(&self, r: f64, y: f64) -> Result<f64> {
        tilde_a(r, y, self.family)
    }

    /// ∂_r Ã = −4sin²(ry+φ)/r³ + 2sin(2(ry+φ))·(y + φ_r)/r².
    pub fn d_r(&self, r: f64, y: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(LabError::Domain(format!("ATilde requires r > 0, got {r}")));
        }
        let u = r * y + self.family.phi(r);
        let s = u.sin();
        Ok(-4.0 * s * s / (r * r * r)
            + 2.0 * (2.0 * u).sin() * (y + self.family.phi_r(r)) / (r * r))
    }

    /// ∂_y Ã = 2 sin(2(ry+φ))/r.
    pub fn d_y(&self, r: f64, y: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(LabError::Domain(format!("ATilde requires r > 0, got {r}")));
        }
        Ok(2.0 * (2.0 * (r * y + self.family.phi(r))).sin() / r)
    }
}

/// sin(2u)/r for u = rv + φ, stable near the axis.
#[inline]
pub(crate) fn sin2u_over_r(r: f64, v: f64, family: &CutoffFamily) -> f64 {
    if r < 0.5 {
        2.0 * v * sinc(2.0 * r * v)
    } else {
        (2.0 * (r * v + family.phi(r))).sin() / r
    }
}

fn quad_to_result(q: QuadResult, r: f64, node: usize) -> Result<f64> {
    if q.converged {
        Ok(q.value)
    } else {
        Err(LabError::Quadrature {
            node,
            r,
            estimate: q.abs_error,
        })
    }
}

/// 3a^{3/2} + a^{−1/2} − a^{−3/2}.
#[inline]
fn f_of_a(a: f64) -> f64 {
    let s = a.sqrt();
    3.0 * a * s + 1.0 / s - 1.0 / (a * s)
}

/// d/da of `f_of_a`.
#[inline]
fn f_of_a_d1(a: f64) -> f64 {
    let s = a.sqrt();
    4.5 * s - 0.5 / (a * s) + 1.5 / (a * a * s)
}

/// d²/da² of `f_of_a`.
#[inline]
fn f_of_a_d2(a: f64) -> f64 {
    let s = a.sqrt();
    2.25 / s + 0.75 / (a * a * s) - 3.75 / (a * a * a * s)
}

/// The r-only corrections of the Φ construction, evaluated from the chosen
/// cutoff family by adaptive quadrature.
#[derive(Debug, Clone)]
pub struct Corrections<'f> {
    family: &'f CutoffFamily,
}

impl<'f> Corrections<'f> {
    pub fn new(family: &'f CutoffFamily) -> Self {
        Corrections { family }
    }

    fn j_integrals(&self, r: f64) -> Result<(f64, f64, f64)> {
        // J = ∫₀^{N₁π} f(A) dw and its first two r-derivatives;
        // A_r = −4 sin²w/r³, A_rr = 12 sin²w/r⁴.
        let plateau = self.family.plateau();
        let j = integrate_default(
            |w| f_of_a(1.0 + 2.0 * (w.sin()).powi(2) / (r * r)),
            0.0,
            plateau,
        );
        let j1 = integrate_default(
            |w| {
                let s2 = w.sin().powi(2);
                let a = 1.0 + 2.0 * s2 / (r * r);
                f_of_a_d1(a) * (-4.0 * s2 / (r * r * r))
            },
            0.0,
            plateau,
        );
        let j2 = integrate_default(
            |w| {
                let s2 = w.sin().powi(2);
                let a = 1.0 + 2.0 * s2 / (r * r);
                let a_r = -4.0 * s2 / (r * r * r);
                let a_rr = 12.0 * s2 / (r * r * r * r);
                f_of_a_d2(a) * a_r * a_r + f_of_a_d1(a) * a_rr
            },
            0.0,
            plateau,
        );
        Ok((
            quad_to_result(j, r, usize::MAX)?,
            quad_to_result(j1, r, usize::MAX)?,
            quad_to_result(j2, r, usize::MAX)?,
        ))
    }

    /// K(r), the explicit Φ₂ → Φ correction (the `correction` field of a
    /// [`PhiBundle`]); supported in {r ≥ 1/2}.
    pub fn k_at(&self, r: f64) -> Result<f64> {
        if self.family.n1() == 0 || self.family.phi_gt1(r) == 0.0 {
            return Ok(0.0);
        }
        let (j, _, _) = self.j_integrals(r)?;
        Ok(self.family.phi_gt1(r) * j / (3.0 * r))
    }

    /// c₁(r) = (1/r)∫_{φ(r)}^{N₁π} A^{1/2} dw; vanishes wherever φ = N₁π.
    pub fn c1_at(&self, r: f64) -> Result<f64> {
        let plateau = self.family.plateau();
        let phi = self.family.phi(r);
        if self.family.n1() == 0 || phi == plateau {
            return Ok(0.0);
        }
        let q = integrate_default(
            |w| (1.0 + 2.0 * w.sin().powi(2) / (r * r)).sqrt(),
            phi,
            plateau,
        );
        Ok(quad_to_result(q, r, usize::MAX)? / r)
    }

    /// c₂(r) = (1/2r)∫_{φ(r)}^{N₁π} f(A) dw.
    pub fn c2_at(&self, r: f64) -> Result<f64> {
        let plateau = self.family.plateau();
        let phi = self.family.phi(r);
        if self.family.n1() == 0 || phi == plateau {
            return Ok(0.0);
        }
        let q = integrate_default(
            |w| f_of_a(1.0 + 2.0 * w.sin().powi(2) / (r * r)),
            phi,
            plateau,
        );
        Ok(quad_to_result(q, r, usize::MAX)? / (2.0 * r))
    }

    /// Full v-route correction C(r) = K(r) − c₁(r); Φ = ∫₀^v Ã^{1/2} dy + C.
    pub fn c_full_at(&self, r: f64) -> Result<f64> {
        Ok(self.k_at(r)? - self.c1_at(r)?)
    }

    /// Δ₅K by the Leibniz rule through the w-quadrature.
    pub fn lap5_k_at(&self, r: f64) -> Result<f64> {
        if self.family.n1() == 0 {
            return Ok(0.0);
        }
        let g = self.family.phi_gt1(r);
        let g1 = self.family.phi_gt1_r(r);
        let g2 = self.family.phi_gt1_rr(r);
        if g == 0.0 && g1 == 0.0 && g2 == 0.0 {
            return Ok(0.0);
        }
        let (j, j1, j2) = self.j_integrals(r)?;
        let p = g * j; // 3r·K
        let p1 = g1 * j + g * j1;
        let p2 = g2 * j + 2.0 * g1 * j1 + g * j2;
        // K = p/(3r): K' = p'/(3r) − p/(3r²), K'' = p''/(3r) − 2p'/(3r²) + 2p/(3r³)
        let r2 = r * r;
        let k1 = p1 / (3.0 * r) - p / (3.0 * r2);
        let k2 = p2 / (3.0 * r) - 2.0 * p1 / (3.0 * r2) + 2.0 * p / (3.0 * r2 * r);
        Ok(k2 + 4.0 / r * k1)
    }

    /// C̃(r) = (3/2)K − c₂ − Δ₅K, the r-only part of □₅Φ.
    pub fn c_tilde_at(&self, r: f64) -> Result<f64> {
        if self.family.n1() == 0 {
            return Ok(0.0);
        }
        Ok(1.5 * self.k_at(r)? - self.c2_at(r)? - self.lap5_k_at(r)?)
    }
}

/// Per-grid cache of the r-only correction fields.
#[derive(Debug, Clone)]
pub struct CorrectionTable {
    pub k: Vec<f64>,
    pub c_full: Vec<f64>,
    pub c_tilde: Vec<f64>,
}

impl CorrectionTable {
    pub fn new(grid: &RadialGrid, family: &CutoffFamily, exec: Execution) -> Result<Self> {
        let n = grid.n_cells();
        if family.n1() == 0 {
            return Ok(CorrectionTable {
                k: vec![0.0; n],
                c_full: vec![0.0; n],
                c_tilde: vec![0.0; n],
            });
        }
        let corr = Corrections::new(family);
        // each column is r-only; errors surface as NaN and are checked after
        let k = map_range(exec, n, |j| corr.k_at(grid.node(j)).unwrap_or(f64::NAN));
        let c_full = map_range(exec, n, |j| {
            corr.c_full_at(grid.node(j)).unwrap_or(f64::NAN)
        });
        let c_tilde = map_range(exec, n, |j| {
            corr.c_tilde_at(grid.node(j)).unwrap_or(f64::NAN)
        });
        for j in 0..n {
            if !(k[j].is_finite() && c_full[j].is_finite() && c_tilde[j].is_finite()) {
                return Err(LabError::Quadrature {
                    node: j,
                    r: grid.node(j),
                    estimate: f64::NAN,
                });
            }
        }
        Ok(CorrectionTable { k, c_full, c_tilde })
    }
}

/// Φ-transform evaluation context for one (grid, family) pair.
#[derive(Debug, Clone)]
pub struct PhiContext<'f> {
    pub family: &'f CutoffFamily,
    pub grid: RadialGrid,
    pub table: CorrectionTable,
}

/// One time-sample of the transform chain.
#[derive(Debug, Clone)]
pub struct PhiBundle {
    pub t: f64,
    pub phi: Vec<f64>,
    pub phi_t: Vec<f64>,
    pub phi_tt: Vec<f64>,
    pub phi_ttt: Vec<f64>,
    pub a_field: Vec<f64>,
    /// K(r), the explicit Φ − Φ₂ correction; supported in {r ≥ 1/2}.
    pub correction: Vec<f64>,
}

impl<'f> PhiContext<'f> {
    pub fn new(grid: &RadialGrid, family: &'f CutoffFamily, exec: Execution) -> Result<Self> {
        let table = CorrectionTable::new(grid, family, exec)?;
        Ok(PhiContext {
            family,
            grid: grid.clone(),
            table,
        })
    }

    fn check_state(&self, state: &VState) -> Result<()> {
        if !state.grid.compatible(&self.grid) {
            return Err(LabError::Data(
                "state grid does not match the transform context".into(),
            ));
        }
        Ok(())
    }

    /// ∫₀^{v} Ã^{1/2}(r, y) dy at a single point.
    pub fn phi_dynamic_value(&self, r: f64, v: f64) -> Result<f64> {
        let q = integrate_default(|y| tilde_a_raw(r, y, self.family).sqrt(), 0.0, v);
        quad_to_result(q, r, usize::MAX)
    }

    /// Φ at a single point (quadrature + corrections on demand; used for
    /// ghost values and the extended static grid).
    pub fn phi_value(&self, r: f64, v: f64) -> Result<f64> {
        let corr = Corrections::new(self.family);
        Ok(self.phi_dynamic_value(r, v)? + corr.c_full_at(r)?)
    }

    /// The compactly-supported part ∫₀^v Ã^{1/2} dy at every node.
    pub fn phi_dynamic(&self, state: &VState, exec: Execution) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let nodes = self.grid.nodes();
        let vals = map_range(exec, nodes.len(), |j| {
            if state.v[j] == 0.0 {
                return 0.0;
            }
            let q = integrate_default(
                |y| tilde_a_raw(nodes[j], y, self.family).sqrt(),
                0.0,
                state.v[j],
            );
            if q.converged {
                q.value
            } else {
                f64::NAN
            }
        });
        for (j, &x) in vals.iter().enumerate() {
            if !x.is_finite() {
                return Err(LabError::Quadrature {
                    node: j,
                    r: nodes[j],
                    estimate: f64::NAN,
                });
            }
        }
        Ok(vals)
    }

    /// Φ = ∫₀^v Ã^{1/2} dy + C(r) at every node.
    pub fn phi_from_v(&self, state: &VState, exec: Execution) -> Result<Vec<f64>> {
        let mut g = self.phi_dynamic(state, exec)?;
        for (x, c) in g.iter_mut().zip(&self.table.c_full) {
            *x += c;
        }
        Ok(g)
    }

    /// Φ_t = Ã^{1/2}(r, v)·v_t.
    pub fn phi_t_from_state(&self, state: &VState) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let nodes = self.grid.nodes();
        Ok((0..nodes.len())
            .map(|j| tilde_a_raw(nodes[j], state.v[j], self.family).sqrt() * state.vt[j])
            .collect())
    }

    /// Φ_tt = Ã^{1/2} v_tt + Ã^{−1/2}(sin 2u/r) v_t².
    pub fn phi_tt_from_state(&self, state: &VState, vtt: &[f64]) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let nodes = self.grid.nodes();
        Ok((0..nodes.len())
            .map(|j| {
                let r = nodes[j];
                let a = tilde_a_raw(r, state.v[j], self.family);
                let sq = a.sqrt();
                sq * vtt[j]
                    + sin2u_over_r(r, state.v[j], self.family) * state.vt[j] * state.vt[j] / sq
            })
            .collect())
    }

    /// Φ_ttt = Ã^{1/2} v_ttt + 3Ã^{−1/2}(sin 2u/r) v_tt v_t
    ///         + Ã^{−3/2}(2 cos 2u − 4 sin⁴u/r²) v_t³.
    pub fn phi_ttt_from_state(
        &self,
        state: &VState,
        vtt: &[f64],
        vttt: &[f64],
    ) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let nodes = self.grid.nodes();
        Ok((0..nodes.len())
            .map(|j| {
                let r = nodes[j];
                let v = state.v[j];
                let vt = state.vt[j];
                let a = tilde_a_raw(r, v, self.family);
                let sq = a.sqrt();
                let u = r * v + self.family.phi(r);
                let sin_u2 = u.sin() * u.sin();
                let coeff = 2.0 * (2.0 * u).cos() - 4.0 * sin_u2 * sin_u2 / (r * r);
                sq * vttt[j]
                    + 3.0 * sin2u_over_r(r, v, self.family) * vtt[j] * vt / sq
                    + coeff * vt * vt * vt / (a * sq)
            })
            .collect())
    }

    /// −(3/2)Φ + (1/2)∫₀^v {3Ã^{3/2}+Ã^{−1/2}−Ã^{−3/2}} dy + C̃(r), reusing a
    /// precomputed Φ.
    pub fn box_phi_rhs_with(
        &self,
        state: &VState,
        phi: &[f64],
        exec: Execution,
    ) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let nodes = self.grid.nodes();
        let vals = map_range(exec, nodes.len(), |j| {
            let r = nodes[j];
            let half_int = if state.v[j] == 0.0 {
                0.0
            } else {
                let q =
                    integrate_default(|y| f_of_a(tilde_a_raw(r, y, self.family)), 0.0, state.v[j]);
                if q.converged {
                    0.5 * q.value
                } else {
                    return f64::NAN;
                }
            };
            -1.5 * phi[j] + half_int + self.table.c_tilde[j]
        });
        for (j, &x) in vals.iter().enumerate() {
            if !x.is_finite() {
                return Err(LabError::Quadrature {
                    node: j,
                    r: nodes[j],
                    estimate: f64::NAN,
                });
            }
        }
        Ok(vals)
    }

    /// As [`Self::box_phi_rhs_with`], computing Φ internally.
    pub fn box_phi_rhs(&self, state: &VState, exec: Execution) -> Result<Vec<f64>> {
        let phi = self.phi_from_v(state, exec)?;
        self.box_phi_rhs_with(state, &phi, exec)
    }

    /// (Ã − 1)(3/2 + Ã^{−2}/2)·Φ_t, the right-hand side of □₅Φ_t.
    pub fn box_phit_rhs(&self, state: &VState) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let nodes = self.grid.nodes();
        Ok((0..nodes.len())
            .map(|j| {
                let r = nodes[j];
                let v = state.v[j];
                let a = tilde_a_raw(r, v, self.family);
                let am1 = a_minus_one(r, v, self.family);
                let phit = a.sqrt() * state.vt[j];
                am1 * (1.5 + 0.5 / (a * a)) * phit
            })
            .collect())
    }

    /// Assemble the full transform sample at one instant.
    pub fn bundle(
        &self,
        state: &VState,
        vtt: &[f64],
        vttt: &[f64],
        exec: Execution,
    ) -> Result<PhiBundle> {
        let phi = self.phi_from_v(state, exec)?;
        let phi_t = self.phi_t_from_state(state)?;
        let phi_tt = self.phi_tt_from_state(state, vtt)?;
        let phi_ttt = self.phi_ttt_from_state(state, vtt, vttt)?;
        let nodes = self.grid.nodes();
        let a_field = (0..nodes.len())
            .map(|j| tilde_a_raw(nodes[j], state.v[j], self.family))
            .collect();
        Ok(PhiBundle {
            t: state.t,
            phi,
            phi_t,
            phi_tt,
            phi_ttt,
            a_field,
            correction: self.table.k.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn ctx<'f>(family: &'f CutoffFamily, dr: f64, r_max: f64) -> PhiContext<'f> {
        let grid = build_grid(5, dr, r_max).unwrap();
        PhiContext::new(&grid, family, Execution::Sequential).unwrap()
    }

    #[test]
    fn tilde_a_values() {
        let f0 = CutoffFamily::new(0);
        // r ≥ 2, ry = π → 1
        assert_eq!(tilde_a(2.0, PI / 2.0, &f0).unwrap(), 1.0);
        // (r=2, y=π/4, φ=0) → 1.5
        assert_relative_eq!(
            tilde_a(2.0, PI / 4.0, &f0).unwrap(),
            1.5,
            max_relative = 1e-15
        );
        // r → 0 limit 1 + 2y²  (any N₁)
        let f1 = CutoffFamily::new(1);
        for y in [0.3, 1.0, 2.0] {
            assert_relative_eq!(
                tilde_a(1e-9, y, &f1).unwrap(),
                1.0 + 2.0 * y * y,
                max_relative = 1e-12
            );
        }
        assert!(tilde_a(0.0, 1.0, &f0).is_err());
        // ≥ 1 everywhere
        for (r, y) in [(0.3, -2.0), (1.2, 0.7), (4.0, -0.1)] {
            assert!(tilde_a(r, y, &f1).unwrap() >= 1.0);
        }
    }

    #[test]
    fn atilde_matches_u_form_and_derivatives() {
        let f1 = CutoffFamily::new(1);
        let a = ATilde::new(&f1);
        for (r, y) in [(0.7, 0.9), (1.4, -0.6), (2.5, 1.3)] {
            // Ã(r, y) = A(r, ry + φ(r)) exactly
            let u = r * y + f1.phi(r);
            let direct = 1.0 + 2.0 * u.sin().powi(2) / (r * r);
            assert_relative_eq!(a.eval(r, y).unwrap(), direct, max_relative = 1e-14);
            assert!(a.eval(r, y).unwrap() >= 1.0);
            // analytic derivatives against finite differences
            let h = 1e-6;
            let fd_r = (a.eval(r + h, y).unwrap() - a.eval(r - h, y).unwrap()) / (2.0 * h);
            assert_relative_eq!(
                a.d_r(r, y).unwrap(),
                fd_r,
                max_relative = 1e-6,
                epsilon = 1e-8
            );
            let fd_y = (a.eval(r, y + h).unwrap() - a.eval(r, y - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(
                a.d_y(r, y).unwrap(),
                fd_y,
                max_relative = 1e-7,
                epsilon = 1e-9
            );
        }
        assert!(a.eval(0.0, 1.0).is_err());
    }

    #[test]
    fn phi_examples() {
        let f0 = CutoffFamily::new(0);
        let c = ctx(&f0, 0.25, 8.0);
        // v = 0 → Φ = 0 (N₁ = 0 so corrections vanish everywhere)
        let zero = VState::vacuum(c.grid.clone()).unwrap();
        assert!(c
            .phi_from_v(&zero, Execution::Sequential)
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
        // golden: N₁=0, r=2, v=1 → ∫₀¹ √(1+sin²(2y)/2) dy (10-digit oracle value)
        assert_relative_eq!(
            c.phi_dynamic_value(2.0, 1.0).unwrap(),
            1.136_102_458_251_583_7,
            max_relative = 1e-11
        );
        // closed form at r → 0: ∫₀^c √(1+2y²) dy = c√(1+2c²)/2 + asinh(√2 c)/(2√2)
        let f1 = CutoffFamily::new(1);
        let c1 = ctx(&f1, 0.25, 8.0);
        for (v, want) in [
            (0.5, 0.538_993_682_711_075_3),
            (1.0, 1.271_273_898_522_815_5),
        ] {
            assert_relative_eq!(
                c1.phi_dynamic_value(1e-7, v).unwrap(),
                want,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn correction_quadrature_goldens() {
        // 30-digit oracle values of K, c1, c2 at r = 1.5, N₁ = 1
        let f1 = CutoffFamily::new(1);
        let corr = Corrections::new(&f1);
        assert_relative_eq!(
            corr.k_at(1.5).unwrap(),
            3.850_968_329_474_077_7,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            corr.c1_at(1.5).unwrap(),
            1.250_955_155_605_230_7,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            corr.c2_at(1.5).unwrap(),
            2.888_226_247_105_558_3,
            max_relative = 1e-11
        );
        // support: everything vanishes for r ≤ 1/2
        for r in [0.1, 0.3, 0.5] {
            assert_eq!(corr.k_at(r).unwrap(), 0.0);
            assert_eq!(corr.c_full_at(r).unwrap(), 0.0);
            assert_eq!(corr.c_tilde_at(r).unwrap(), 0.0);
        }
        // large-r tail: C(r)·r³/π → 4/3
        assert_relative_eq!(
            corr.c_full_at(16.0).unwrap(),
            1.022_668_355_522_268_4e-3,
            max_relative = 1e-9
        );
    }

    #[test]
    fn lap5_k_matches_finite_differences() {
        let f1 = CutoffFamily::new(1);
        let corr = Corrections::new(&f1);
        let h = 1e-4;
        for r in [0.8, 1.2, 1.7, 2.5, 4.0] {
            let k = |x: f64| corr.k_at(x).unwrap();
            let d2 = (k(r + h) - 2.0 * k(r) + k(r - h)) / (h * h);
            let d1 = (k(r + h) - k(r - h)) / (2.0 * h);
            let fd = d2 + 4.0 / r * d1;
            assert_relative_eq!(
                corr.lap5_k_at(r).unwrap(),
                fd,
                max_relative = 1e-5,
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn construction_equivalence_both_routes() {
        // v-route (∫₀^v Ã^{1/2} dy + C) vs u-route ((1/r)∫_{N₁π}^{u} A^{1/2} dw + K)
        // at every node, including the transition band.
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 1.0 / 16.0, 6.0);
        let v: Vec<f64> = c
            .grid
            .nodes()
            .iter()
            .map(|&r| 0.7 * (-0.4 * r * r).exp() + 0.05)
            .collect();
        let vt = vec![0.0; v.len()];
        let state = VState::new(0.0, c.grid.clone(), v, vt).unwrap();
        let phi = c.phi_from_v(&state, Execution::Sequential).unwrap();
        let corr = Corrections::new(&f1);
        for (j, &r) in c.grid.nodes().iter().enumerate() {
            let u = r * state.v[j] + f1.phi(r);
            let q = integrate_default(
                |w| (1.0 + 2.0 * w.sin().powi(2) / (r * r)).sqrt(),
                f1.plateau(),
                u,
            );
            let u_route = q.value / r + corr.k_at(r).unwrap();
            assert_relative_eq!(phi[j], u_route, max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn phi_t_values() {
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 0.25, 8.0);
        let n = c.grid.n_cells();
        // v_t = 0 → 0
        let s0 = VState::new(0.0, c.grid.clone(), vec![0.3; n], vec![0.0; n]).unwrap();
        assert!(c.phi_t_from_state(&s0).unwrap().iter().all(|&x| x == 0.0));
        // golden (r=1/2, v=1, vt=2) → 2√(1+8 sin²(1/2))
        assert_relative_eq!(
            tilde_a_raw(0.5, 1.0, &f1).sqrt() * 2.0,
            3.369_742_290_756_04,
            max_relative = 1e-12
        );
        // sin u = 0 nodes → Φ_t = v_t: at r ≥ 2 pick v = π/r
        let f0 = CutoffFamily::new(0);
        let c0 = ctx(&f0, 0.25, 8.0);
        let r = 4.125;
        let j = c0
            .grid
            .nodes()
            .iter()
            .position(|&x| (x - r).abs() < 1e-12)
            .unwrap();
        let mut v = vec![0.0; n];
        let mut vt = vec![0.0; n];
        v[j] = PI / r;
        vt[j] = 1.7;
        let s = VState::new(0.0, c0.grid.clone(), v, vt).unwrap();
        let pt = c0.phi_t_from_state(&s).unwrap();
        assert_relative_eq!(pt[j], 1.7, max_relative = 1e-14);
    }

    /// Oracle for the time-derivative formulas: move v along a manufactured
    /// path v(t) = v₀ + v₁t + v₂t²/2 + v₃t³/6 and difference Φ(t) in time.
    #[test]
    fn phi_tt_and_ttt_match_time_differences() {
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 0.25, 8.0);
        let r = 1.625;
        let (v0, v1, v2, v3) = (0.6, -0.4, 0.8, 0.5);
        let phi_at = |t: f64| {
            let v = v0 + v1 * t + v2 * t * t / 2.0 + v3 * t * t * t / 6.0;
            c.phi_value(r, v).unwrap()
        };
        let dt = 1e-3;
        let stencil2 = (phi_at(dt) - 2.0 * phi_at(0.0) + phi_at(-dt)) / (dt * dt);
        let stencil3 = (phi_at(2.0 * dt) - 2.0 * phi_at(dt) + 2.0 * phi_at(-dt)
            - phi_at(-2.0 * dt))
            / (2.0 * dt * dt * dt);
        // formulas, evaluated pointwise
        let a = tilde_a_raw(r, v0, &f1);
        let formula2 = a.sqrt() * v2 + sin2u_over_r(r, v0, &f1) * v1 * v1 / a.sqrt();
        let u = r * v0 + f1.phi(r);
        let coeff = 2.0 * (2.0 * u).cos() - 4.0 * u.sin().powi(4) / (r * r);
        let formula3 = a.sqrt() * v3
            + 3.0 * sin2u_over_r(r, v0, &f1) * v2 * v1 / a.sqrt()
            + coeff * v1 * v1 * v1 / (a * a.sqrt());
        assert_relative_eq!(stencil2, formula2, max_relative = 1e-6);
        assert_relative_eq!(stencil3, formula3, max_relative = 1e-4);
    }

    #[test]
    fn phi_ttt_trivial_cases() {
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 0.25, 8.0);
        let n = c.grid.n_cells();
        let s = VState::new(0.0, c.grid.clone(), vec![0.4; n], vec![0.0; n]).unwrap();
        let z = vec![0.0; n];
        assert!(c
            .phi_ttt_from_state(&s, &z, &z)
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn box_phit_values() {
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 0.25, 8.0);
        let n = c.grid.n_cells();
        // Φ_t = 0 → 0
        let s0 = VState::new(0.0, c.grid.clone(), vec![0.5; n], vec![0.0; n]).unwrap();
        assert!(c.box_phit_rhs(&s0).unwrap().iter().all(|&x| x == 0.0));
        // Ã = 1 nodes → 0: v = 0 keeps Ã = 1 where φ plateau holds
        let s1 = VState::new(0.0, c.grid.clone(), vec![0.0; n], vec![1.0; n]).unwrap();
        let b = c.box_phit_rhs(&s1).unwrap();
        assert_eq!(b[0], 0.0);
        // (Ã = 3, Φ_t = 1) → 28/9: near the axis Ã = 1 + 2v², so v = 1, vt = 1/√3
        let a = tilde_a_raw(1e-9, 1.0, &f1);
        let phit = a.sqrt() * (1.0 / 3.0f64.sqrt());
        let val = a_minus_one(1e-9, 1.0, &f1) * (1.5 + 0.5 / (a * a)) * phit;
        assert_relative_eq!(val, 28.0 / 9.0, max_relative = 1e-8);
    }

    #[test]
    fn box_phi_cubic_small_field_asymptotics() {
        // r ≪ 1, |v| ≪ 1: value → (4/3)v³ (oracle ratio 1.000000006)
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 0.25, 8.0);
        let r = 1e-3;
        let v = 1e-2;
        let q = integrate_default(|y| f_of_a(tilde_a_raw(r, y, &f1)), 0.0, v);
        let phi = c.phi_dynamic_value(r, v).unwrap();
        let val = -1.5 * phi + 0.5 * q.value;
        assert_relative_eq!(val, 4.0 / 3.0 * v * v * v, max_relative = 1e-6);
    }

    #[test]
    fn dynamic_part_is_odd_in_v() {
        // Ã(r, ·) is even in y wherever φ(r) is a multiple of π: on the
        // axis plateau, in the far field, and everywhere for N₁ = 0.
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 0.25, 8.0);
        for (r, v) in [(0.375, 0.8), (0.875, 1.3), (3.125, 0.2)] {
            let plus = c.phi_dynamic_value(r, v).unwrap();
            let minus = c.phi_dynamic_value(r, -v).unwrap();
            assert_relative_eq!(plus, -minus, max_relative = 1e-12);
        }
        let f0 = CutoffFamily::new(0);
        let c0 = ctx(&f0, 0.25, 8.0);
        for (r, v) in [(0.625, 0.9), (1.375, 1.1), (2.125, 0.4)] {
            let plus = c0.phi_dynamic_value(r, v).unwrap();
            let minus = c0.phi_dynamic_value(r, -v).unwrap();
            assert_relative_eq!(plus, -minus, max_relative = 1e-12);
        }
    }

    #[test]
    fn envelope_ratios_on_test_family() {
        // |Φ| ~ |v| + v² for r < 1/2 and |Φ − C| ~ |v| for r ≥ 1, with
        // ratios in [1/4, 4] while r|v| ≤ 1.
        let f1 = CutoffFamily::new(1);
        let c = ctx(&f1, 1.0 / 16.0, 8.0);
        for amp in [0.2, 0.7, 1.5] {
            let v: Vec<f64> = c
                .grid
                .nodes()
                .iter()
                .map(|&r| amp * (-0.3 * r * r).exp().min(1.0 / (amp * r)))
                .collect();
            let vt = vec![0.0; v.len()];
            let state = VState::new(0.0, c.grid.clone(), v, vt).unwrap();
            let g = c.phi_dynamic(&state, Execution::Sequential).unwrap();
            for (j, &r) in c.grid.nodes().iter().enumerate() {
                let av = state.v[j].abs();
                if av < 1e-8 {
                    continue;
                }
                if r < 0.5 {
                    let ratio = g[j].abs() / (av + av * av);
                    assert!(
                        ratio > 0.25 && ratio < 4.0,
                        "small-r ratio {ratio} at r={r}"
                    );
                } else if r >= 1.0 {
                    let ratio = g[j].abs() / av;
                    assert!(
                        ratio > 0.25 && ratio < 4.0,
                        "large-r ratio {ratio} at r={r}"
                    );
                }
            }
        }
    }
}
