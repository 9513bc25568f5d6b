//! Empirical spot checks of the toolbox inequalities on a fixed documented
//! family: Hardy (‖g/r‖_{L²} ≤ C‖∇g‖_{L²}, sharp C = 2/(n−2)) and the
//! radial Sobolev bound r^{(n−1)/2}|f(r)| ≲ ‖f‖_{H¹}.
//!
//! The family is {e^{−ar²} : a ∈ {1/2, 1, 2}} ∪ {r^m e^{−r²} : m ∈ {1, 2}}
//! ∪ {bump((r−c)/w) : (c, w) ∈ {(2,1), (4,2)}}. For each inequality the
//! report carries the family maximum of LHS/RHS on two grids; a jump above
//! 10% between them flags a discretization problem.

use crate::cutoff::smoothstep01;
use crate::error::Result;
use crate::exec::Execution;
use crate::grid::{build_grid, RadialGrid};
use crate::sobolev::{h1_norm_radial, l2_norm_radial};
use crate::stencil::{gradient, AxisParity};

#[derive(Debug, Clone)]
pub struct SpotRow {
    pub inequality: String,
    pub member: String,
    pub ratio_coarse: f64,
    pub ratio_fine: f64,
    pub grid_stable: bool,
}

#[derive(Debug, Clone)]
pub struct SpotcheckReport {
    pub rows: Vec<SpotRow>,
    pub hardy_family_max: f64,
    pub radial_sobolev_family_max: f64,
    pub all_stable: bool,
}

type Member = (String, Box<dyn Fn(f64) -> f64>);

fn family() -> Vec<Member> {
    let mut fam: Vec<Member> = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        fam.push((
            format!("exp(-{a}r^2)"),
            Box::new(move |r: f64| (-a * r * r).exp()),
        ));
    }
    for m in [1i32, 2] {
        fam.push((
            format!("r^{m} exp(-r^2)"),
            Box::new(move |r: f64| r.powi(m) * (-r * r).exp()),
        ));
    }
    for (c, w) in [(2.0, 1.0), (4.0, 2.0)] {
        fam.push((
            format!("bump((r-{c})/{w})"),
            // C^∞ plateau bump assembled from two smoothsteps
            Box::new(move |r: f64| smoothstep01((r - c + w) / w) * smoothstep01((c + w - r) / w)),
        ));
    }
    fam
}

fn hardy_ratio(f: &[f64], grid: &RadialGrid) -> f64 {
    let over_r: Vec<f64> = f
        .iter()
        .enumerate()
        .map(|(j, &x)| x / grid.node(j))
        .collect();
    let grad = gradient(f, grid, AxisParity::Even, [0.0, 0.0], Execution::Sequential);
    l2_norm_radial(&over_r, grid) / l2_norm_radial(&grad, grid)
}

fn radial_sobolev_ratio(f: &[f64], grid: &RadialGrid) -> f64 {
    // sup r²|f| / ‖f‖_{H¹(R⁵)}
    let sup = grid
        .nodes()
        .iter()
        .zip(f)
        .map(|(&r, &x)| r * r * x.abs())
        .fold(0.0, f64::max);
    sup / h1_norm_radial(f, grid, Execution::Sequential)
}

/// Evaluate both inequalities on the documented family at `dr` and `dr/2`.
pub fn inequality_spotcheck(dr: f64, r_max: f64) -> Result<SpotcheckReport> {
    let coarse = build_grid(5, dr, r_max)?;
    let fine = build_grid(5, dr / 2.0, r_max)?;
    let mut rows = Vec::new();
    let mut hardy_max = 0.0f64;
    let mut rs_max = 0.0f64;
    for (name, f) in family() {
        let fc: Vec<f64> = coarse.nodes().iter().map(|&r| f(r)).collect();
        let ff: Vec<f64> = fine.nodes().iter().map(|&r| f(r)).collect();
        let hc = hardy_ratio(&fc, &coarse);
        let hf = hardy_ratio(&ff, &fine);
        hardy_max = hardy_max.max(hf);
        rows.push(SpotRow {
            inequality: "hardy_dim5_p2".into(),
            member: name.clone(),
            ratio_coarse: hc,
            ratio_fine: hf,
            grid_stable: (hf - hc).abs() <= 0.1 * hc.abs().max(1e-300),
        });
        let rc = radial_sobolev_ratio(&fc, &coarse);
        let rf = radial_sobolev_ratio(&ff, &fine);
        rs_max = rs_max.max(rf);
        rows.push(SpotRow {
            inequality: "radial_sobolev_dim5".into(),
            member: name,
            ratio_coarse: rc,
            ratio_fine: rf,
            grid_stable: (rf - rc).abs() <= 0.1 * rc.abs().max(1e-300),
        });
    }
    let all_stable = rows.iter().all(|r| r.grid_stable);
    Ok(SpotcheckReport {
        rows,
        hardy_family_max: hardy_max,
        radial_sobolev_family_max: rs_max,
        all_stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hardy_respects_the_sharp_constant() {
        let rep = inequality_spotcheck(1.0 / 64.0, 16.0).unwrap();
        // dim 5, p = 2: sharp constant 2/(n−2) = 2/3
        assert!(
            rep.hardy_family_max <= 2.0 / 3.0 + 1e-3,
            "family max {} above the Hardy constant",
            rep.hardy_family_max
        );
        assert!(rep.all_stable);
    }

    #[test]
    fn radial_sobolev_is_finite_and_stable() {
        let rep = inequality_spotcheck(1.0 / 64.0, 16.0).unwrap();
        assert!(rep.radial_sobolev_family_max.is_finite());
        assert!(rep.radial_sobolev_family_max > 0.0);
        for row in rep
            .rows
            .iter()
            .filter(|r| r.inequality == "radial_sobolev_dim5")
        {
            assert!(
                row.grid_stable,
                "{} unstable: {} vs {}",
                row.member, row.ratio_coarse, row.ratio_fine
            );
        }
    }

    #[test]
    fn zero_field_gives_zero_ratios() {
        let g = build_grid(5, 0.125, 8.0).unwrap();
        let z = vec![0.0; g.n_cells()];
        // 0/0 treated as 0 by convention
        let ratio = if l2_norm_radial(&z, &g) == 0.0 {
            0.0
        } else {
            hardy_ratio(&z, &g)
        };
        assert_eq!(ratio, 0.0);
    }
}
