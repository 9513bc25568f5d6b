//! The cutoff family: the smooth step profile φ and the unit partition
//! φ_{<1} + φ_{>1} ≡ 1.
//!
//! All three are realized from the C^∞ bump h(x) = exp(−1/x)·[x>0] via the
//! smoothstep s(x) = h(x)/(h(x)+h(1−x)):
//!
//!   φ(r)     = N₁π · s(2 − r)   (≡ N₁π on [0,1], ≡ 0 on [2,∞), decreasing)
//!   φ_{<1}(r) = s(2 − 2r)        (≡ 1 on [0,1/2], ≡ 0 on [1,∞))
//!
//! Derivatives are evaluated from the closed smoothstep formulas, never by
//! finite differences. The transition-band values are implementation-defined;
//! the golden values in the tests were recorded from a 30-digit oracle run
//! of these exact formulas.

use crate::grid::RadialGrid;

fn bump(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn bump_d1(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp() / (x * x)
    } else {
        0.0
    }
}

fn bump_d2(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp() * (1.0 - 2.0 * x) / (x * x * x * x)
    } else {
        0.0
    }
}

fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let h = bump(x);
        h / (h + bump(1.0 - x))
    }
}

fn smoothstep_d1(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let h = bump(x);
    let g = bump(1.0 - x);
    let hp = bump_d1(x);
    let gp = -bump_d1(1.0 - x);
    (hp * g - h * gp) / ((h + g) * (h + g))
}

fn smoothstep_d2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let h = bump(x);
    let g = bump(1.0 - x);
    let hp = bump_d1(x);
    let gp = -bump_d1(1.0 - x);
    let hpp = bump_d2(x);
    let gpp = bump_d2(1.0 - x);
    let den = h + g;
    ((hpp * g - h * gpp) * den - 2.0 * (hp * g - h * gp) * (hp + gp)) / (den * den * den)
}

/// The clamped C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1. Shared by the cutoff
/// family, data cuts, and grid tapers.
pub fn smoothstep01(x: f64) -> f64 {
    smoothstep(x)
}

/// Pointwise cutoff evaluation, as returned by [`CutoffFamily::eval`].
#[derive(Debug, Clone, Copy)]
pub struct CutoffEval {
    pub phi: f64,
    pub phi_r: f64,
    pub phi_rr: f64,
    pub phi_lt1: f64,
    pub phi_gt1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFamily {
    n1: u32,
}

impl CutoffFamily {
    pub fn new(n1: u32) -> Self {
        CutoffFamily { n1 }
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    /// N₁π, the axis plateau value of φ.
    pub fn plateau(&self) -> f64 {
        self.n1 as f64 * std::f64::consts::PI
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.plateau() * smoothstep(2.0 - r)
    }

    pub fn phi_r(&self, r: f64) -> f64 {
        -self.plateau() * smoothstep_d1(2.0 - r)
    }

    pub fn phi_rr(&self, r: f64) -> f64 {
        self.plateau() * smoothstep_d2(2.0 - r)
    }

    /// Δ₃φ = φ_rr + (2/r)φ_r, the source term of the v-equation.
    pub fn lap3_phi(&self, r: f64) -> f64 {
        self.phi_rr(r) + 2.0 / r * self.phi_r(r)
    }

    pub fn phi_lt1(&self, r: f64) -> f64 {
        smoothstep(2.0 - 2.0 * r)
    }

    pub fn phi_lt1_r(&self, r: f64) -> f64 {
        -2.0 * smoothstep_d1(2.0 - 2.0 * r)
    }

    pub fn phi_lt1_rr(&self, r: f64) -> f64 {
        4.0 * smoothstep_d2(2.0 - 2.0 * r)
    }

    pub fn phi_gt1(&self, r: f64) -> f64 {
        1.0 - self.phi_lt1(r)
    }

    pub fn phi_gt1_r(&self, r: f64) -> f64 {
        -self.phi_lt1_r(r)
    }

    pub fn phi_gt1_rr(&self, r: f64) -> f64 {
        -self.phi_lt1_rr(r)
    }

    pub fn eval(&self, r: f64) -> CutoffEval {
        let lt1 = self.phi_lt1(r);
        CutoffEval {
            phi: self.phi(r),
            phi_r: self.phi_r(r),
            phi_rr: self.phi_rr(r),
            phi_lt1: lt1,
            phi_gt1: 1.0 - lt1,
        }
    }
}

/// Total function over r ≥ 0: cutoff values and analytic derivatives.
pub fn eval_cutoffs(family: &CutoffFamily, r: f64) -> CutoffEval {
    family.eval(r)
}

/// Per-node cutoff cache for a grid (the smoothstep exponentials are not
/// cheap enough to re-evaluate inside every RK stage).
#[derive(Debug, Clone)]
pub struct CutoffTable {
    pub phi: Vec<f64>,
    pub phi_r: Vec<f64>,
    pub lap3_phi: Vec<f64>,
    pub lt1: Vec<f64>,
    pub gt1: Vec<f64>,
}

impl CutoffTable {
    pub fn new(grid: &RadialGrid, family: &CutoffFamily) -> Self {
        let n = grid.n_cells();
        let mut t = CutoffTable {
            phi: Vec::with_capacity(n),
            phi_r: Vec::with_capacity(n),
            lap3_phi: Vec::with_capacity(n),
            lt1: Vec::with_capacity(n),
            gt1: Vec::with_capacity(n),
        };
        for &r in grid.nodes() {
            let e = family.eval(r);
            t.phi.push(e.phi);
            t.phi_r.push(e.phi_r);
            t.lap3_phi.push(e.phi_rr + 2.0 / r * e.phi_r);
            t.lt1.push(e.phi_lt1);
            t.gt1.push(e.phi_gt1);
        }
        t
    }
}
