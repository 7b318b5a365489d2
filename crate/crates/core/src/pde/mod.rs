//! Explicit finite-difference integration of the reaction–diffusion system
//! on a square with zero-flux boundaries.

mod ftcs;
mod grid;
pub mod io;

pub use ftcs::{
    ftcs_step, ftcs_step_into, initial_condition, perturbed_state, simulate, simulate_from, Perturbation,
    NEGATIVITY_TOL,
};
pub use grid::{FieldGrid, GridSpec, SnapshotSchedule, FIELD_NAMES};
