//! skyrme-lab: a numerical laboratory for the equivariant Skyrme field
//! equations.
//!
//! The crate evolves the radial quasilinear wave equation for the azimuthal
//! angle u(t, r) in its regularized v-form (u = r·v + φ(r)), builds the Φ
//! transform chain, and measures everything the theory says should stay
//! bounded: energy, topological charge, weighted decay monitors, the
//! continuation quantity, fractional Sobolev norms, and PDE residuals. The
//! semilinear σ-model is included as the contrast case whose closed-form
//! solution blows up in finite time.
//!
//! Entry points:
//! * [`evolve::run`] — method-of-lines evolution with scheduled diagnostics;
//! * [`scenarios`] — initial-data families, the static-skyrmion shooting
//!   solver, and the initial-data validator;
//! * [`diagnostics`] / [`sobolev`] — the measurement toolbox;
//! * the `skyrme-lab` binary — batch CLI over config files.

// `!(x > 0.0)` deliberately treats NaN as out of domain; the suggested
// `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// golden constants and quadrature tables carry their full published digits
#![allow(clippy::excessive_precision)]

pub mod config;
pub mod cutoff;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod evolve;
pub mod exec;
pub mod grid;
pub mod quad;
pub mod scenarios;
pub mod series;
pub mod skyrmion;
pub mod sobolev;
pub mod spotcheck;
pub mod state;
pub mod stencil;
pub mod transforms;

pub use error::{LabError, Result};
pub use exec::Execution;
