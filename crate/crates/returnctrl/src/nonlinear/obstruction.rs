//! The quadratic obstruction: with `u²` in the second equation, `v` never
//! falls below the uncontrolled `v*` solving `v*_t − Δv* = Rv*`.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlinear::coupling::Coupling;
use crate::pde::{omega_mask, SpaceTimeGrid};

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub n_controls: usize,
    pub seed: u64,
    pub control_amplitude: f64,
    /// `min over controls and nodes of v(T) − v*(T)`
    pub min_gap: f64,
    /// `min over controls and nodes of v(T)`
    pub min_v: f64,
    /// `min v*(T)`
    pub min_v_star: f64,
    /// per-control `min v(T) − v*(T)`
    pub gaps: Vec<f64>,
}

/// Solves `(1 + 2k + c) w_j − k(w_{j−1} + w_{j+1}) = r_j` in place.
fn solve_tridiag(r: &mut [f64], k: f64, c: f64) {
    let n = r.len();
    let b = 1.0 + 2.0 * k + c;
    let mut cp = vec![0.0; n];
    let mut m = b;
    cp[0] = -k / m;
    r[0] /= m;
    for j in 1..n {
        m = b + k * cp[j - 1];
        cp[j] = -k / m;
        r[j] = (r[j] + k * r[j - 1]) / m;
    }
    for j in (0..n - 1).rev() {
        r[j] -= cp[j] * r[j + 1];
    }
}

/// Implicit Euler run of `u_t − Δu = g(u, v) + h1_ω`, `v_t − Δv = u² + Rv`
/// with `g` lagged; returns `v(T)`.
fn run(grid: &SpaceTimeGrid, g: &dyn Coupling<f64>, reaction: f64, u0: &[f64], v0: &[f64], h: Option<&[f64]>, mask: &[bool]) -> Vec<f64> {
    let nx = grid.nx;
    let dt = grid.dt();
    let k = dt / (grid.dx() * grid.dx());
    let mut u = u0.to_vec();
    let mut v = v0.to_vec();
    for n in 0..grid.nt {
        let mut nu: Vec<f64> = (0..nx)
            .map(|j| {
                let hj = match h {
                    Some(h) if mask[j] => h[(n + 1) * nx + j],
                    _ => 0.0,
                };
                u[j] + dt * (g.g(u[j], v[j]) + hj)
            })
            .collect();
        solve_tridiag(&mut nu, k, 0.0);
        let mut nv: Vec<f64> = (0..nx).map(|j| v[j] + dt * nu[j] * nu[j]).collect();
        solve_tridiag(&mut nv, k, -dt * reaction);
        u = nu;
        v = nv;
    }
    v
}

/// `v*(T)` for `v*_t − Δv* = Rv*`, same discretization as the coupled run.
pub fn free_v(grid: &SpaceTimeGrid, reaction: f64, v0: &[f64]) -> Vec<f64> {
    let k = grid.dt() / (grid.dx() * grid.dx());
    let mut v = v0.to_vec();
    for _ in 0..grid.nt {
        solve_tridiag(&mut v, k, -grid.dt() * reaction);
    }
    v
}

/// Runs `n_controls` seeded random controls on `omega` (i.i.d. normal nodal
/// values times `amplitude`) and compares `v(T)` with `v*(T)`.
#[allow(clippy::too_many_arguments)]
pub fn demo_obstruction(
    grid: &SpaceTimeGrid,
    g: &dyn Coupling<f64>,
    reaction: f64,
    u0: &[f64],
    v0: &[f64],
    omega: (f64, f64),
    n_controls: usize,
    amplitude: f64,
    seed: u64,
) -> Result<ObstructionReport> {
    grid.validate()?;
    if grid.theta != 1.0 {
        return Err(Error::Precondition(format!(
            "the comparison argument needs the implicit scheme (theta = 1), got {}",
            grid.theta
        )));
    }
    if u0.len() != grid.nx || v0.len() != grid.nx {
        return Err(Error::Parameter(format!("initial profiles need {} values", grid.nx)));
    }
    if let Some(x) = v0.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::Precondition(format!("v0 must be nonnegative, found {x}")));
    }
    if !(grid.dt() * reaction < 1.0) {
        return Err(Error::Precondition(format!(
            "dt·R = {} must stay below 1 for the scheme to preserve order",
            grid.dt() * reaction
        )));
    }
    let mask = omega_mask(grid, omega);
    let v_star = free_v(grid, reaction, v0);
    let levels = grid.levels() * grid.nx;
    let results: Vec<(f64, f64)> = (0..n_controls)
        .into_par_iter()
        .map(|i| {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(
                seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            );
            let h: Vec<f64> = (0..levels)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    amplitude * z
                })
                .collect();
            let v = run(grid, g, reaction, u0, v0, Some(&h), &mask);
            let gap = v.iter().zip(&v_star).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
            let min_v = v.iter().cloned().fold(f64::INFINITY, f64::min);
            (gap, min_v)
        })
        .collect();
    let gaps: Vec<f64> = results.iter().map(|r| r.0).collect();
    Ok(ObstructionReport {
        n_controls,
        seed,
        control_amplitude: amplitude,
        min_gap: gaps.iter().cloned().fold(f64::INFINITY, f64::min),
        min_v: results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
        min_v_star: v_star.iter().cloned().fold(f64::INFINITY, f64::min),
        gaps,
    })
}
