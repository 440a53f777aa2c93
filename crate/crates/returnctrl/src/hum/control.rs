//! Penalized weighted null controls over the full horizon.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hum::dual::DualOperator;
use crate::hum::weights::{build_weights, CarlemanWeight};
use crate::pde::{CoefficientSet, Field, FieldPair, SpaceTimeGrid, Window};
use crate::scalar::Scalar;

/// Settings of the control solve.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct HumConfig {
    /// weight strength `s`
    pub s: f64,
    /// clamping fraction of `η`
    pub kappa: f64,
    pub penalty_epsilon: f64,
    /// relative residual at which CG stops
    pub cg_tol: f64,
    /// iteration cap; `0` means `20·(2nx)`
    pub cg_max_iter: usize,
    /// `ω₁` as a fraction of `ω₀`, centred
    pub omega1_fraction: f64,
}

impl Default for HumConfig {
    fn default() -> Self {
        HumConfig {
            s: DEFAULT_S,
            kappa: 0.05,
            penalty_epsilon: 1e-6,
            cg_tol: 1e-10,
            cg_max_iter: 0,
            omega1_fraction: 0.5,
        }
    }
}

/// Default weight strength.
pub const DEFAULT_S: f64 = 0.1;

impl HumConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.penalty_epsilon > 0.0 && self.penalty_epsilon.is_finite()) {
            return Err(Error::Parameter(format!(
                "penalty_epsilon must be positive, got {}",
                self.penalty_epsilon
            )));
        }
        if !(self.cg_tol > 0.0 && self.cg_tol < 1.0) {
            return Err(Error::Parameter(format!("cg_tol must lie in (0, 1), got {}", self.cg_tol)));
        }
        if !(self.omega1_fraction > 0.0 && self.omega1_fraction < 1.0) {
            return Err(Error::Parameter(format!(
                "omega1_fraction must lie in (0, 1), got {}",
                self.omega1_fraction
            )));
        }
        Ok(())
    }

    pub fn max_iter(&self, grid: &SpaceTimeGrid) -> usize {
        if self.cg_max_iter == 0 {
            40 * grid.nx
        } else {
            self.cg_max_iter
        }
    }

    /// `ω₁` inside the window's `ω₀`.
    pub fn omega1(&self, window: &Window) -> (f64, f64) {
        let c = 0.5 * (window.x_lo + window.x_hi);
        let r = 0.5 * self.omega1_fraction * (window.x_hi - window.x_lo);
        (c - r, c + r)
    }

    pub fn weights(&self, grid: &SpaceTimeGrid, window: Window) -> Result<CarlemanWeight> {
        build_weights(grid, self.s, window, self.omega1(&window), self.kappa)
    }
}

#[derive(Debug, Clone)]
pub struct ControlResult<S: Scalar> {
    pub h: Field<S>,
    pub zeta: FieldPair<S>,
    /// minimizing adjoint final datum, components stacked
    pub phi_t: Vec<S>,
    pub terminal_norm: f64,
    /// `‖ζ(t2)‖`, the quantity driven to `ε‖φ_T‖`
    pub target_norm: f64,
    pub weighted_norm: f64,
    pub sup_norm: f64,
    pub penalty_epsilon: f64,
    pub s: f64,
    pub window: Window,
    pub cg_iterations: usize,
    pub cg_residual: f64,
    pub cg_floor_limited: bool,
    pub cg_history: Vec<f64>,
    /// largest eigenvalue of the dual operator before normalization
    pub lambda_max: f64,
}

/// One row of a penalty sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub penalty_epsilon: f64,
    pub terminal_norm: f64,
    pub target_norm: f64,
    pub weighted_norm: f64,
    pub sup_norm: f64,
    pub cg_iterations: usize,
    pub cg_residual: f64,
    pub cg_floor_limited: bool,
}

impl<S: Scalar> From<&ControlResult<S>> for SweepRow {
    fn from(r: &ControlResult<S>) -> Self {
        SweepRow {
            penalty_epsilon: r.penalty_epsilon,
            terminal_norm: r.terminal_norm,
            target_norm: r.target_norm,
            weighted_norm: r.weighted_norm,
            sup_norm: r.sup_norm,
            cg_iterations: r.cg_iterations,
            cg_residual: r.cg_residual,
            cg_floor_limited: r.cg_floor_limited,
        }
    }
}

/// Control solver for fixed coefficients, weight and initial data. The dual
/// operator is normalized once and reused across penalties.
#[derive(Debug, Clone)]
pub struct ControlSolver<S: Scalar> {
    op: DualOperator<S>,
    weight: CarlemanWeight,
    alpha: (Vec<S>, Vec<S>),
    free: FieldPair<S>,
    /// free state at `t2`
    b: Vec<S>,
    lambda_max: f64,
    cg_tol: f64,
    max_iter: usize,
}

impl<S: Scalar> ControlSolver<S> {
    pub fn new(
        grid: &SpaceTimeGrid,
        coeffs: &CoefficientSet<S>,
        alpha: (&[S], &[S]),
        weight: &CarlemanWeight,
        cfg: &HumConfig,
    ) -> Result<Self> {
        Self::with_scale(grid, coeffs, alpha, weight, cfg, None)
    }

    /// As [`Self::new`], reusing a weight scale from an earlier solve instead
    /// of normalizing `Λ` again.
    pub fn with_scale(
        grid: &SpaceTimeGrid,
        coeffs: &CoefficientSet<S>,
        alpha: (&[S], &[S]),
        weight: &CarlemanWeight,
        cfg: &HumConfig,
        scale: Option<f64>,
    ) -> Result<Self> {
        cfg.validate()?;
        if alpha.0.len() != grid.nx || alpha.1.len() != grid.nx {
            return Err(Error::Parameter(format!(
                "initial profiles need {} values, got {} and {}",
                grid.nx,
                alpha.0.len(),
                alpha.1.len()
            )));
        }
        if alpha.0.iter().chain(alpha.1).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("initial data is not finite".into()));
        }
        let mut op = DualOperator::new(grid, coeffs, weight)?;
        let lambda_max = match scale {
            Some(k) => {
                op.scale = k;
                1.0 / k
            }
            None => op.normalize()?,
        };
        let mut free = FieldPair::zeros(grid);
        op.stepper().forward_range(0, grid.nt, alpha, None, None, &mut free);
        let mut b = free.first.row(op.n2).to_vec();
        b.extend_from_slice(free.second.row(op.n2));
        Ok(ControlSolver {
            op,
            weight: weight.clone(),
            alpha: (alpha.0.to_vec(), alpha.1.to_vec()),
            free,
            b,
            lambda_max,
            cg_tol: cfg.cg_tol,
            max_iter: cfg.max_iter(grid),
        })
    }

    /// Weight scale in use (`1/λ_max` after normalization).
    pub fn scale(&self) -> f64 {
        self.op.scale
    }

    pub fn operator(&mut self) -> &mut DualOperator<S> {
        &mut self.op
    }

    /// Free state at `t2`, the right-hand side of the dual problem.
    pub fn target(&self) -> &[S] {
        &self.b
    }

    /// Uncontrolled trajectory.
    pub fn free_state(&self) -> &FieldPair<S> {
        &self.free
    }

    pub fn solve(&mut self, penalty_epsilon: f64) -> Result<ControlResult<S>> {
        self.solve_from(penalty_epsilon, None)
    }

    /// Warm-started solve; `guess` is a previous `φ_T`.
    pub fn solve_from(&mut self, penalty_epsilon: f64, guess: Option<&[S]>) -> Result<ControlResult<S>> {
        if !(penalty_epsilon > 0.0 && penalty_epsilon.is_finite()) {
            return Err(Error::Parameter(format!(
                "penalty_epsilon must be positive, got {penalty_epsilon}"
            )));
        }
        let b = self.b.clone();
        let cg = self.op.solve_from(&b, penalty_epsilon, self.cg_tol, self.max_iter, guess)?;
        let h = self.op.control(&cg.phi);
        let grid = *self.op.grid();
        let mut zeta = FieldPair::zeros(&grid);
        let all = vec![true; grid.nx];
        self.op.stepper().forward_range(
            0,
            grid.nt,
            (&self.alpha.0, &self.alpha.1),
            Some((&h, &all)),
            None,
            &mut zeta,
        );
        let weighted_norm = weighted_norm(&h, &self.weight, self.op.scale)?;
        Ok(ControlResult {
            terminal_norm: zeta.final_norm(),
            target_norm: zeta.level_norm(self.op.n2),
            weighted_norm,
            sup_norm: h.sup_norm(),
            h,
            zeta,
            phi_t: cg.phi,
            penalty_epsilon,
            s: self.weight.s,
            window: self.weight.window,
            cg_iterations: cg.iterations,
            cg_residual: cg.residual,
            cg_floor_limited: cg.floor_limited,
            cg_history: cg.history,
            lambda_max: self.lambda_max,
        })
    }

    /// Independent solves for each penalty, in parallel, ordered as given.
    pub fn sweep(&self, penalties: &[f64]) -> Result<Vec<ControlResult<S>>> {
        penalties
            .par_iter()
            .map_init(|| self.clone(), |s, &eps| s.solve(eps))
            .collect()
    }
}

/// `‖(W/scale)^{-1/2} h‖` with the discrete `dt·dx` measure; `W` is the
/// normalized weight actually used in the control law.
pub fn weighted_norm<S: Scalar>(h: &Field<S>, weight: &CarlemanWeight, scale: f64) -> Result<f64> {
    let g = h.grid;
    let mut sum = 0.0;
    for (k, v) in h.data.iter().enumerate() {
        let w = weight.w.data[k] * scale;
        if w > 0.0 {
            sum += v.norm_sqr() / w;
        } else if v.norm_sqr() != 0.0 {
            return Err(Error::Consistency(
                "control is nonzero outside the weighted window".into(),
            ));
        }
    }
    let out = (sum * g.dt() * g.dx()).sqrt();
    if !out.is_finite() {
        return Err(Error::WeightConfig("weighted norm overflows".into()));
    }
    Ok(out)
}

/// One-shot control solve.
pub fn solve_penalized_control<S: Scalar>(
    grid: &SpaceTimeGrid,
    coeffs: &CoefficientSet<S>,
    alpha: (&[S], &[S]),
    weight: &CarlemanWeight,
    cfg: &HumConfig,
) -> Result<ControlResult<S>> {
    ControlSolver::new(grid, coeffs, alpha, weight, cfg)?.solve(cfg.penalty_epsilon)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Geometric penalty schedule from `hi` down to `lo` with `per_decade` points.
pub fn penalty_schedule(hi: f64, lo: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n)
        .map(|k| hi * 10f64.powf(-(k as f64) / per_decade as f64))
        .collect()
}
