//! Penalized weighted null controls for the linear coupled system and an
//! empirical observability estimate.

pub mod control;
pub mod dual;
pub mod observe;
pub mod weights;
pub mod window;

pub use control::{
    log_slope, penalty_schedule, solve_penalized_control, weighted_norm, ControlResult,
    ControlSolver, HumConfig, SweepRow, DEFAULT_S,
};
pub use dual::{CgOutcome, DualOperator};
pub use observe::{estimate_observability, observability_ratio, ObservabilityReport};
pub use weights::{build_weights, eta, psi_coefficient, CarlemanWeight, WeightSummary};
pub use window::{select_window, WINDOW_LEVEL};
