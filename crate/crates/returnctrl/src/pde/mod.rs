//! Space-time grids, fields and the θ-scheme forward/adjoint solvers.

pub mod coeffs;
pub mod field;
pub mod grid;
pub mod solver;

pub use coeffs::{CoefficientSet, Window};
pub use field::{inner, l2, Field, FieldPair};
pub use grid::SpaceTimeGrid;
pub use solver::{
    omega_mask, solve_adjoint, solve_forward, solve_forward_forced, AdjointSolution, Stepper,
};
