//! Coefficients of the system for `ζ = (u, v) − (ū, v̄)` frozen at an iterate.

use crate::error::{Error, Result};
use crate::nonlinear::coupling::Coupling;
use crate::pde::{CoefficientSet, Field, FieldPair, Window};
use crate::scalar::Scalar;
use crate::trajectory::ReferenceTrajectory;
use crate::Kind;

/// Relative threshold below which the difference quotients of `G₁₁`, `G₁₂`
/// switch to the derivative closures.
pub const QUOTIENT_THRESHOLD: f64 = 1e-8;

/// Window indicator: `G₂₁(0,0) = 3ū²` (cubic) or `|Im G₂₁(0,0)| = |2 Im ū|`
/// (complex quadratic).
pub fn window_indicator<S: Scalar>(traj: &ReferenceTrajectory<S>) -> Field<f64> {
    let g = traj.grid;
    let mut f = Field::zeros(&g);
    for (k, u) in traj.u_bar.data.iter().enumerate() {
        f.data[k] = match traj.kind {
            Kind::Cubic => 3.0 * u.norm_sqr(),
            Kind::QuadraticComplex => (2.0 * u.im()).abs(),
        };
    }
    f
}

/// `(u^p − ū^p)/ζ₁` as a polynomial in `ū, ζ₁`.
pub fn g21<S: Scalar>(kind: Kind, ub: S, z1: S) -> S {
    match kind {
        Kind::Cubic => (ub * ub).scale(3.0) + (ub * z1).scale(3.0) + z1 * z1,
        Kind::QuadraticComplex => ub.scale(2.0) + z1,
    }
}

/// Pointwise `G₁₁, G₁₂, G₂₁, G₂₂ = R` at `z`, with `M̄` measured and the
/// bound `a21 ≥ 1/M̄` (or `|Im a21| ≥ 1/M̄`) checked on `window`.
pub fn freeze_coefficients<S: Scalar>(
    traj: &ReferenceTrajectory<S>,
    g: &dyn Coupling<S>,
    z: &FieldPair<S>,
    window: Window,
) -> Result<CoefficientSet<S>> {
    let grid = traj.grid;
    if z.first.grid != grid || z.second.grid != grid {
        return Err(Error::Parameter("iterate lives on another grid".into()));
    }
    let scale = traj.u_bar.sup_norm().max(traj.v_bar.sup_norm()).max(1.0);
    let tau = QUOTIENT_THRESHOLD * scale;
    let mut c = CoefficientSet::zeros(&grid);
    let rr = S::from_f64(traj.reaction);
    for k in 0..grid.levels() * grid.nx {
        let ub = traj.u_bar.data[k];
        let vb = traj.v_bar.data[k];
        let z1 = z.first.data[k];
        let z2 = z.second.data[k];
        c.a11.data[k] = if z1.abs() > tau {
            (g.g(ub + z1, vb + z2) - g.g(ub, vb + z2)) / z1
        } else {
            g.dg_du(ub, vb + z2)
        };
        c.a12.data[k] = if z2.abs() > tau {
            (g.g(ub, vb + z2) - g.g(ub, vb)) / z2
        } else {
            g.dg_dv(ub, vb)
        };
        c.a21.data[k] = g21(traj.kind, ub, z1);
        c.a22.data[k] = rr;
    }
    c.window = Some(window);
    let lo = c.window_lower_bound().unwrap_or(0.0);
    if !(lo > 0.0) {
        return Err(Error::CouplingDegeneracy(format!(
            "G21 vanishes somewhere on the window ({:.4}, {:.4}) x ({:.4}, {:.4}); \
             the trajectory is too small there or the iterate too large",
            window.t1, window.t2, window.x_lo, window.x_hi
        )));
    }
    c.m_bar = c.sup_norm().max(1.0 / lo) * (1.0 + 1e-12);
    c.validate()?;
    Ok(c)
}
