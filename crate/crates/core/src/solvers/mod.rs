//! Monotone iteration for the singular scalar problem and fixed-point
//! iteration for the coupled system on expanding balls.

mod coupled;
mod fit;
mod report;
mod scalar;
mod system;

pub use coupled::{solve_coupled_alg, solve_coupled_exp};
pub use fit::{decay_fit, DecayFit};
pub use report::{
    fit_window, truncation_radius, BallGrowth, FieldFit, IterationState, Residuals, SandwichMargin, SolveReport,
    SolveStatus, SANDWICH_SLACK,
};
pub use scalar::{
    scalar_barriers, solve_singular_scalar, GridControl, ScalarBarriers, ScalarRegime, ScalarWeight, SolverOptions,
};
pub use system::solve_system;
