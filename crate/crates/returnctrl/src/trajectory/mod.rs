//! Explicit compactly supported reference trajectory `(ū, v̄, h̄)`.
//!
//! The radial profile `V(t, r) = Σ f_i(t) g_i(r/λ(t))` is assembled from a
//! source `G`, its radial potential `g₀`, band profiles `g_i` and time
//! profiles `f_i`; `K` is the signed cube root (or the cut square root in the
//! complex kind) of `V_t − ΔV`. Rescaling and shifting gives the trajectory.

pub mod assemble;
pub mod bumps;
pub mod profile;
pub mod radial;
pub mod smooth;
pub mod source;
pub mod time;
pub mod verify;

pub use assemble::{
    assemble_trajectory, build_model, kernel_root, nodal_residual, sqrt_cut, DominationReport, ReferenceTrajectory, SupportBox,
    TrajectoryModel,
};
pub use bumps::{build_bump_profiles, BumpProfiles};
pub use profile::SampledProfile;
pub use radial::{solve_radial_ode, RadialProfile};
pub use source::{construct_source_profile, SourceProfile, SourceReport};
pub use time::{build_time_profiles, TimeProfiles};
pub use verify::{profile_constraints, verify_trajectory, ProfileReport, RefinementRow, SmoothnessRow, TrajectoryReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ε` of [`BumpConfig::resolvable`].
pub const RESOLVABLE_EPSILON: f64 = 0.4;

/// Scalar parameters of the trajectory construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BumpConfig {
    /// Amplitude `ε` of `λ(t) = ε(1 − t²)²`; `None` picks the largest value
    /// up to 1/2 that passes the remainder checks.
    pub bump_epsilon: Option<f64>,
    pub delta: f64,
    pub dim: usize,
    pub reaction: f64,
    pub rho_radius: f64,
    pub center_t: f64,
    pub center_x: f64,
    pub z_grid_n: usize,
    pub t_grid_n: usize,
    /// Whether a failed remainder check aborts the construction.
    pub remainder_check: RemainderCheck,
}

/// Policy for the remainder-domination checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemainderCheck {
    /// Fail with a construction error.
    #[default]
    Enforce,
    /// Record the outcome only; `K` may then lose smoothness where `A` has
    /// extra zeros, but `v̄_t − Δv̄ − Rv̄ = ū^p` still holds pointwise.
    Report,
}

impl Default for BumpConfig {
    fn default() -> Self {
        BumpConfig {
            bump_epsilon: None,
            delta: 0.05,
            dim: 1,
            reaction: 1.0,
            rho_radius: 0.2,
            center_t: 0.25,
            center_x: 0.5,
            z_grid_n: 2049,
            t_grid_n: 2049,
            remainder_check: RemainderCheck::Enforce,
        }
    }
}

impl BumpConfig {
    /// Amplitude large enough for the support to be resolved by desk-scale
    /// grids, with the remainder checks only reported.
    pub fn resolvable() -> Self {
        BumpConfig {
            bump_epsilon: Some(RESOLVABLE_EPSILON),
            remainder_check: RemainderCheck::Report,
            ..Default::default()
        }
    }

    /// Default configuration for a horizon `T` and control set `ω = (a, b)`
    /// centred at `x₀ = (a + b)/2`.
    pub fn for_window(t_final: f64, omega: (f64, f64)) -> Self {
        let center_x = 0.5 * (omega.0 + omega.1);
        let dist = 0.5 * (omega.1 - omega.0);
        BumpConfig {
            rho_radius: 0.4 * t_final.min(dist),
            center_t: 0.5 * t_final,
            center_x,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 0.1) {
            return Err(Error::Parameter(format!(
                "delta must lie in (0, 1/10), got {}",
                self.delta
            )));
        }
        if self.dim < 1 {
            return Err(Error::Parameter("dim must be at least 1".into()));
        }
        if let Some(e) = self.bump_epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::Parameter(format!("bump_epsilon must be positive, got {e}")));
            }
        }
        if !(self.rho_radius > 0.0 && self.rho_radius.is_finite()) {
            return Err(Error::Parameter(format!(
                "rho_radius must be positive, got {}",
                self.rho_radius
            )));
        }
        if !self.reaction.is_finite() {
            return Err(Error::Parameter("reaction must be finite".into()));
        }
        if self.z_grid_n < 17 || self.t_grid_n < 17 {
            return Err(Error::Parameter("profile grids need at least 17 nodes".into()));
        }
        Ok(())
    }
}
