//! Finite-domain integer linear programs and their reduction to vector
//! domination.

mod model;
mod reduction;
mod solve;

pub use model::{
    accumulator_fits, coordinate_bound, evaluate, validate_no_overflow, Assignment, Constraint,
    DomainSpec, IlpInstance, Verdict,
};
pub use reduction::{enumerate_left, enumerate_right, merge_tags, split_variables, VariableSplit};
pub use solve::{
    brute_force_feasibility, brute_force_feasibility_counted, optimize, solve_feasibility,
    OptimizeOutcome, ParamSpec, Preset, SolveOptions, SolveOutcome, Strategy,
    DEFAULT_MAX_SIDE_VECTORS,
};
