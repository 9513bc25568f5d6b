//! Fourth-order centered finite differences on the cell-centered grid,
//! with two parity ghost cells at the axis and two fixed-value ghost
//! cells beyond r_max.

use crate::exec::{fill_range, Execution};
use crate::grid::RadialGrid;

/// Reflection rule at r = 0. A radial function is `Even` (v, Φ) or odd
/// about some plateau value (u − N₁π for the Skyrme boundary data;
/// `OddAbout(0.0)` for the σ-model's u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisParity {
    Even,
    OddAbout(f64),
}

impl AxisParity {
    #[inline]
    fn mirror(&self, f: f64) -> f64 {
        match self {
            AxisParity::Even => f,
            AxisParity::OddAbout(a) => 2.0 * a - f,
        }
    }
}

/// Quadratic extrapolation of the last three samples to the two outer
/// ghost radii; the natural outer closure for standalone measurements.
pub fn extrapolate_outer(f: &[f64]) -> [f64; 2] {
    let n = f.len();
    if n < 3 {
        return [*f.last().unwrap_or(&0.0); 2];
    }
    [
        3.0 * f[n - 1] - 3.0 * f[n - 2] + f[n - 3],
        6.0 * f[n - 1] - 8.0 * f[n - 2] + 3.0 * f[n - 3],
    ]
}

/// `f` padded with 2 ghost samples on each side; `pad[j + 2] = f[j]`.
pub fn pad(f: &[f64], parity: AxisParity, outer: [f64; 2]) -> Vec<f64> {
    let n = f.len();
    let mut p = Vec::with_capacity(n + 4);
    p.push(parity.mirror(f[1]));
    p.push(parity.mirror(f[0]));
    p.extend_from_slice(f);
    p.push(outer[0]);
    p.push(outer[1]);
    p
}

#[inline]
pub fn deriv1_at(pad: &[f64], j: usize, dr: f64) -> f64 {
    let i = j + 2;
    (-pad[i + 2] + 8.0 * pad[i + 1] - 8.0 * pad[i - 1] + pad[i - 2]) / (12.0 * dr)
}

#[inline]
pub fn deriv2_at(pad: &[f64], j: usize, dr: f64) -> f64 {
    let i = j + 2;
    (-pad[i + 2] + 16.0 * pad[i + 1] - 30.0 * pad[i] + 16.0 * pad[i - 1] - pad[i - 2])
        / (12.0 * dr * dr)
}

/// ∂_r f at every node.
pub fn gradient(
    f: &[f64],
    grid: &RadialGrid,
    parity: AxisParity,
    outer: [f64; 2],
    exec: Execution,
) -> Vec<f64> {
    let p = pad(f, parity, outer);
    let dr = grid.dr();
    let mut out = vec![0.0; f.len()];
    fill_range(exec, &mut out, |j| deriv1_at(&p, j, dr));
    out
}

/// Δ_dim f = f_rr + ((dim−1)/r) f_r at every node.
pub fn laplacian(
    f: &[f64],
    grid: &RadialGrid,
    parity: AxisParity,
    outer: [f64; 2],
    exec: Execution,
) -> Vec<f64> {
    let p = pad(f, parity, outer);
    let dr = grid.dr();
    let c = (grid.dim() - 1) as f64;
    let nodes = grid.nodes();
    let mut out = vec![0.0; f.len()];
    fill_range(exec, &mut out, |j| {
        deriv2_at(&p, j, dr) + c / nodes[j] * deriv1_at(&p, j, dr)
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    #[test]
    fn fourth_order_on_even_gaussian() {
        // Δ₅ e^{−r²} = (4r² − 10)e^{−r²}
        let mut errs = Vec::new();
        for k in [5, 6] {
            let dr = (2.0f64).powi(-k);
            let g = build_grid(5, dr, 8.0).unwrap();
            let f: Vec<f64> = g.nodes().iter().map(|&r| (-r * r).exp()).collect();
            let lap = laplacian(&f, &g, AxisParity::Even, [0.0, 0.0], Execution::Sequential);
            let err = g
                .nodes()
                .iter()
                .zip(&lap)
                .map(|(&r, &l)| (l - (4.0 * r * r - 10.0) * (-r * r).exp()).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 3.7, "observed order {order}, errors {errs:?}");
    }

    #[test]
    fn odd_about_plateau() {
        // u = π + sin(r) is odd about π at the axis; u_r = cos(r)
        let g = build_grid(3, 0.01, 2.0).unwrap();
        let pi = std::f64::consts::PI;
        let f: Vec<f64> = g.nodes().iter().map(|&r| pi + r.sin()).collect();
        let outer = [pi + (2.005f64).sin(), pi + (2.015f64).sin()];
        let df = gradient(
            &f,
            &g,
            AxisParity::OddAbout(pi),
            outer,
            Execution::Sequential,
        );
        for (j, &r) in g.nodes().iter().enumerate() {
            assert!(
                (df[j] - r.cos()).abs() < 1e-7,
                "at r = {r}: {} vs {}",
                df[j],
                r.cos()
            );
        }
    }

    #[test]
    fn outer_ghosts_enter_the_last_rows() {
        let g = build_grid(5, 0.5, 2.0).unwrap();
        let f = vec![0.0; 4];
        let lap = laplacian(&f, &g, AxisParity::Even, [1.0, 0.0], Execution::Sequential);
        assert!(lap[3] != 0.0);
        assert!(lap[2] != 0.0);
        assert_eq!(lap[0], 0.0);
    }
}
