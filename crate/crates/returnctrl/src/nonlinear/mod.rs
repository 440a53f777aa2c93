//! Nonlinear driver: frozen coefficients, Picard iteration, residual check
//! and the quadratic obstruction.

pub mod coupling;
pub mod freeze;
pub mod obstruction;
pub mod picard;
pub mod residual;

pub use coupling::{Coupling, Damping, FnCoupling, Product, Reaction};
pub use freeze::{freeze_coefficients, g21, window_indicator, QUOTIENT_THRESHOLD};
pub use obstruction::{demo_obstruction, free_v, ObstructionReport};
pub use picard::{
    default_window, run_picard, NonlinearProblem, PicardConfig, PicardOutcome, PicardRecord,
    ResidualSummary, PICARD_PENALTY, PICARD_S,
};
pub use residual::{check_residual, residual_fields, ResidualReport};
