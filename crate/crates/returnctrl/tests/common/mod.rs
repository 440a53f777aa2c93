#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use returnctrl::nonlinear::{Coupling, Reaction};
use returnctrl::pde::SpaceTimeGrid;
use returnctrl::trajectory::{assemble_trajectory, build_model, BumpConfig, ReferenceTrajectory};
use returnctrl::{Kind, Scalar};

pub const OMEGA: (f64, f64) = (0.2, 0.8);

pub fn grid() -> SpaceTimeGrid {
    SpaceTimeGrid::new(0.0, 1.0, 200, 0.5, 400, 0.5).unwrap()
}

pub fn coupling<S: Scalar>(kind: Kind) -> Arc<dyn Coupling<S>> {
    Arc::new(Reaction::new(1.0, kind.power() as u32))
}

/// Resolvable reference trajectory sampled on `grid()`.
pub fn trajectory<S: Scalar>(kind: Kind) -> Arc<ReferenceTrajectory<S>> {
    let m = Arc::new(build_model::<S>(&BumpConfig::resolvable(), kind).unwrap());
    Arc::new(assemble_trajectory(m, &grid(), OMEGA, &*coupling::<S>(kind)).unwrap())
}

/// `c·(sin πx, sin πx)`, with a `sin 2πx` imaginary part in the complex case.
pub fn small_data<S: Scalar>(grid: &SpaceTimeGrid, c: f64) -> Vec<S> {
    (0..grid.nx)
        .map(|j| {
            let x = grid.x(j);
            let im = if S::COMPLEX { 0.5 * c * (2.0 * PI * x).sin() } else { 0.0 };
            S::from_parts(c * (PI * x).sin(), im)
        })
        .collect()
}
