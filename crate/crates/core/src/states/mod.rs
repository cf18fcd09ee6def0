//! Probability weights, exact state solving, dispersion-free states and
//! density-operator states.

mod dispersion;
mod gleason;
mod solver;
mod weights;

pub use dispersion::{
    dispersion_free_states, dispersion_free_states_with_cap, dispersion_free_supports, is_udf,
    is_udf_with_cap, DEFAULT_OUTCOME_CAP,
};
pub use gleason::{gleason_state, DensityMatrix, DENSITY_TOL};
pub use solver::{find_state, solve_state, Feasibility, InfeasibilityCertificate};
pub use weights::{
    extend_to_event, perp_separating, verify_state, ExactState, FloatState, State, StateCheck,
    Weight, DEFAULT_STATE_TOL,
};
