//! Picard iteration on the frozen-coefficient control problem.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hum::{ControlResult, ControlSolver, HumConfig};
use crate::nonlinear::coupling::Coupling;
use crate::nonlinear::freeze::{freeze_coefficients, window_indicator};
use crate::nonlinear::residual::{check_residual, residual_fields, ResidualReport};
use crate::hum::{select_window, WINDOW_LEVEL};
use crate::pde::{Field, FieldPair, Window};
use crate::scalar::Scalar;
use crate::trajectory::ReferenceTrajectory;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PicardConfig {
    /// stop once `‖z^k − z^{k−1}‖∞ ≤ tol·max(‖z^k‖∞, ‖(u0, v0)‖∞)`
    pub tol: f64,
    pub max_iter: usize,
    /// smallness bound `δ` as a fraction of `max|ū|`
    pub delta_fraction: f64,
    /// admissible `‖z‖∞` as a fraction of `max|ū|`
    pub nu_fraction: f64,
    /// threshold of the window indicator, relative to its maximum
    pub window_level: f64,
    /// settings of the embedded control solves; keys left out of a config
    /// file keep the values below, not those of a standalone control solve
    #[serde(deserialize_with = "control_overrides")]
    pub control: HumConfig,
}

fn control_overrides<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<HumConfig, D::Error> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Partial {
        s: Option<f64>,
        kappa: Option<f64>,
        penalty_epsilon: Option<f64>,
        cg_tol: Option<f64>,
        cg_max_iter: Option<usize>,
        omega1_fraction: Option<f64>,
    }
    let p = Partial::deserialize(d)?;
    let base = PicardConfig::default().control;
    Ok(HumConfig {
        s: p.s.unwrap_or(base.s),
        kappa: p.kappa.unwrap_or(base.kappa),
        penalty_epsilon: p.penalty_epsilon.unwrap_or(base.penalty_epsilon),
        cg_tol: p.cg_tol.unwrap_or(base.cg_tol),
        cg_max_iter: p.cg_max_iter.unwrap_or(base.cg_max_iter),
        omega1_fraction: p.omega1_fraction.unwrap_or(base.omega1_fraction),
    })
}

/// Weight strength of the embedded control solves.
pub const PICARD_S: f64 = 0.003;
/// Penalty of the embedded control solves.
pub const PICARD_PENALTY: f64 = 1e-11;

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig {
            tol: 1e-6,
            max_iter: 15,
            delta_fraction: 1e-3,
            nu_fraction: 0.25,
            window_level: WINDOW_LEVEL,
            control: HumConfig {
                s: PICARD_S,
                penalty_epsilon: PICARD_PENALTY,
                ..HumConfig::default()
            },
        }
    }
}

/// Trajectory, coupling and initial data.
#[derive(Clone)]
pub struct NonlinearProblem<S: Scalar> {
    pub traj: Arc<ReferenceTrajectory<S>>,
    pub g: Arc<dyn Coupling<S>>,
    pub u0: Vec<S>,
    pub v0: Vec<S>,
    /// bound on `‖u0‖∞ + ‖v0‖∞`
    pub delta: f64,
}

impl<S: Scalar> NonlinearProblem<S> {
    pub fn new(
        traj: Arc<ReferenceTrajectory<S>>,
        g: Arc<dyn Coupling<S>>,
        u0: Vec<S>,
        v0: Vec<S>,
        delta_fraction: f64,
    ) -> Result<Self> {
        let delta = delta_fraction * traj.u_bar.sup_norm();
        let p = NonlinearProblem { traj, g, u0, v0, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let nx = self.traj.grid.nx;
        if self.u0.len() != nx || self.v0.len() != nx {
            return Err(Error::Parameter(format!(
                "initial profiles need {nx} values, got {} and {}",
                self.u0.len(),
                self.v0.len()
            )));
        }
        if self.g.g(S::zero(), S::zero()) != S::zero() {
            return Err(Error::Precondition("coupling must satisfy g(0, 0) = 0".into()));
        }
        let size = self.data_size();
        if !(size < self.delta) {
            return Err(Error::Precondition(format!(
                "initial data too large: |u0| + |v0| = {size:.4e} is not below delta = {:.4e}",
                self.delta
            )));
        }
        Ok(())
    }

    /// `‖u0‖∞ + ‖v0‖∞`
    pub fn data_size(&self) -> f64 {
        let m = |v: &[S]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        m(&self.u0) + m(&self.v0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PicardRecord {
    pub k: usize,
    pub update_norm: f64,
    pub sup_norm: f64,
    pub terminal_norm: f64,
    pub m_bar: f64,
    pub cg_iterations: usize,
    pub cg_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualSummary {
    /// residual of `(u, v, h)`
    pub solution: ResidualReport,
    /// residual of `(ū, v̄, h̄)` alone: the scheme truncation of the trajectory
    pub reference: ResidualReport,
    /// `max |r(u, v, h) − r(ū, v̄, h̄)|`
    pub excess: f64,
    /// what the iteration and rounding account for: `10·M̄·(last update)`
    /// plus `1000·u` times the size of the discrete terms
    pub excess_bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct PicardOutcome<S: Scalar> {
    pub u: Field<S>,
    pub v: Field<S>,
    pub h: Field<S>,
    pub zeta: FieldPair<S>,
    pub history: Vec<PicardRecord>,
    pub converged: bool,
    pub window: Window,
    /// `‖(u, v)(T)‖`
    pub terminal_norm: f64,
    /// `‖(u0, v0)‖`
    pub data_norm: f64,
    pub residual: ResidualSummary,
    pub control: ControlResult<S>,
}

/// Window from `G₂₁(0, 0)`.
pub fn default_window<S: Scalar>(traj: &ReferenceTrajectory<S>, level: f64) -> Result<Window> {
    select_window(&window_indicator(traj), level)
}

/// Runs the iteration `z^{k+1} = ζ[z^k]` from `z⁰ = 0`.
pub fn run_picard<S: Scalar>(problem: &NonlinearProblem<S>, cfg: &PicardConfig) -> Result<PicardOutcome<S>> {
    let hum = &cfg.control;
    problem.validate()?;
    let traj = &*problem.traj;
    let grid = traj.grid;
    let nx = grid.nx;
    let alpha: (Vec<S>, Vec<S>) = (
        (0..nx).map(|j| problem.u0[j] - traj.u_bar.at(0, j)).collect(),
        (0..nx).map(|j| problem.v0[j] - traj.v_bar.at(0, j)).collect(),
    );
    let data_sup = alpha.0.iter().chain(&alpha.1).fold(0.0f64, |m, v| m.max(v.abs()));
    let data_norm = (alpha.0.iter().chain(&alpha.1).map(|v| v.norm_sqr()).sum::<f64>() * grid.dx()).sqrt();
    let nu = cfg.nu_fraction * traj.u_bar.sup_norm();

    let window = default_window(traj, cfg.window_level)?;
    let weight = hum.weights(&grid, window)?;
    let mut z = FieldPair::zeros(&grid);
    let mut scale = None;
    let mut history: Vec<PicardRecord> = Vec::new();
    let mut growths = 0;
    let mut last: Option<ControlResult<S>> = None;
    let mut converged = false;
    for k in 1..=cfg.max_iter {
        let coeffs = freeze_coefficients(traj, &*problem.g, &z, window)?;
        let mut solver = ControlSolver::with_scale(&grid, &coeffs, (&alpha.0, &alpha.1), &weight, hum, scale)?;
        scale = Some(solver.scale());
        let res = solver.solve_from(hum.penalty_epsilon, last.as_ref().map(|r| r.phi_t.as_slice()))?;
        let update = res.zeta.diff_sup(&z);
        let sup = res.zeta.sup_norm();
        history.push(PicardRecord {
            k,
            update_norm: update,
            sup_norm: sup,
            terminal_norm: res.terminal_norm,
            m_bar: coeffs.m_bar,
            cg_iterations: res.cg_iterations,
            cg_residual: res.cg_residual,
        });
        let updates: Vec<f64> = history.iter().map(|r| r.update_norm).collect();
        if sup > nu {
            return Err(Error::Divergence { step: k, history: updates });
        }
        if k > 1 && update > history[k - 2].update_norm {
            growths += 1;
            if growths >= 3 {
                return Err(Error::Divergence { step: k, history: updates });
            }
        } else {
            growths = 0;
        }
        z = res.zeta.clone();
        last = Some(res);
        if update <= cfg.tol * sup.max(data_sup) {
            converged = true;
            break;
        }
    }
    let control = last.expect("at least one iteration");
    let u = traj.u_bar.zip_map(&z.first, |a, b| a + b);
    let v = traj.v_bar.zip_map(&z.second, |a, b| a + b);
    let h = traj.h_bar.zip_map(&control.h, |a, b| a + b);
    let power = traj.kind.power() as u32;
    let g = &*problem.g;
    let solution = check_residual(&u, &v, &h, g, power, traj.reaction, traj.omega);
    let outside_ok = solution.control_outside == 0.0;
    let reference = check_residual(&traj.u_bar, &traj.v_bar, &traj.h_bar, g, power, traj.reaction, traj.omega);
    let (a1, a2) = residual_fields(&u, &v, &h, g, power, traj.reaction);
    let (b1, b2) = residual_fields(&traj.u_bar, &traj.v_bar, &traj.h_bar, g, power, traj.reaction);
    let excess = a1
        .data
        .iter()
        .zip(&b1.data)
        .chain(a2.data.iter().zip(&b2.data))
        .fold(0.0f64, |m, (a, b)| m.max((*a - *b).abs()));
    let last_update = history.last().map_or(0.0, |r| r.update_norm);
    let m_bar = history.last().map_or(0.0, |r| r.m_bar);
    let term_scale = u.sup_norm().max(v.sup_norm()) * (1.0 / grid.dt() + 4.0 / (grid.dx() * grid.dx()))
        + h.sup_norm()
        + m_bar * u.sup_norm().max(v.sup_norm());
    let excess_bound = 10.0 * m_bar * last_update + 1e3 * f64::EPSILON * term_scale;
    let terminal_norm = {
        let n = grid.nt;
        let s: f64 = u.row(n).iter().chain(v.row(n)).map(|x| x.norm_sqr()).sum();
        (s * grid.dx()).sqrt()
    };
    Ok(PicardOutcome {
        u,
        v,
        h,
        zeta: z,
        history,
        converged,
        window,
        terminal_norm,
        data_norm,
        residual: ResidualSummary {
            solution,
            reference,
            excess,
            excess_bound,
            passed: excess <= excess_bound && outside_ok,
        },
        control,
    })
}
