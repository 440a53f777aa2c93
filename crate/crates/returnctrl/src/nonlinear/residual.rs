//! θ-scheme residual of the nonlinear system, evaluated directly from the
//! fields without the linear solvers.

use serde::Serialize;

use crate::nonlinear::coupling::{pow, Coupling};
use crate::pde::Field;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// `max |r₁|` of the first equation
    pub first: f64,
    /// `max |r₂|` of the second equation
    pub second: f64,
    /// largest `|h|` at nodes outside `ω`
    pub control_outside: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.first.max(self.second)
    }
}

/// Residual fields `(r₁, r₂)` on steps `n → n+1`, stored at level `n+1`
/// (level 0 is zero).
pub fn residual_fields<S: Scalar>(
    u: &Field<S>,
    v: &Field<S>,
    h: &Field<S>,
    g: &dyn Coupling<S>,
    power: u32,
    reaction: f64,
) -> (Field<S>, Field<S>) {
    let grid = u.grid;
    let (nx, dt) = (grid.nx, grid.dt());
    let k = 1.0 / (grid.dx() * grid.dx());
    let th = grid.theta;
    let lap = |f: &Field<S>, n: usize, j: usize| {
        let l = if j > 0 { f.at(n, j - 1) } else { S::zero() };
        let r = if j + 1 < nx { f.at(n, j + 1) } else { S::zero() };
        (l + r - f.at(n, j).scale(2.0)).scale(k)
    };
    let rhs1 = |n: usize, j: usize| lap(u, n, j) + g.g(u.at(n, j), v.at(n, j)) + h.at(n, j);
    let rhs2 = |n: usize, j: usize| {
        lap(v, n, j) + pow(u.at(n, j), power) + v.at(n, j).scale(reaction)
    };
    let mut r1 = Field::zeros(&grid);
    let mut r2 = Field::zeros(&grid);
    for n in 0..grid.nt {
        for j in 0..nx {
            let d1 = (u.at(n + 1, j) - u.at(n, j)).scale(1.0 / dt);
            let d2 = (v.at(n + 1, j) - v.at(n, j)).scale(1.0 / dt);
            r1.set(n + 1, j, d1 - rhs1(n + 1, j).scale(th) - rhs1(n, j).scale(1.0 - th));
            r2.set(n + 1, j, d2 - rhs2(n + 1, j).scale(th) - rhs2(n, j).scale(1.0 - th));
        }
    }
    (r1, r2)
}

/// Max-norm residuals of `(u, v, h)` and the control leaking out of `omega`.
pub fn check_residual<S: Scalar>(
    u: &Field<S>,
    v: &Field<S>,
    h: &Field<S>,
    g: &dyn Coupling<S>,
    power: u32,
    reaction: f64,
    omega: (f64, f64),
) -> ResidualReport {
    let (r1, r2) = residual_fields(u, v, h, g, power, reaction);
    let grid = u.grid;
    let mut outside = 0.0f64;
    for n in 0..grid.levels() {
        for j in 0..grid.nx {
            let x = grid.x(j);
            if x < omega.0 || x > omega.1 {
                outside = outside.max(h.at(n, j).abs());
            }
        }
    }
    ResidualReport {
        first: r1.sup_norm(),
        second: r2.sup_norm(),
        control_outside: outside,
    }
}
