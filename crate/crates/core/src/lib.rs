//! Exact feasibility for 0-1 and finite-domain integer linear programs.
//!
//! A program `M x >= r` over `n` variables is split into two halves of
//! variables. Every partial assignment of the left half becomes a vector of
//! partial constraint sums, every partial assignment of the right half a
//! vector of residual right-hand sides, and the program is feasible exactly
//! when some left vector dominates some right vector coordinatewise. The
//! domination search is a weighted-median divide and conquer that discards
//! one quadrant of candidate pairs at every balanced split.
//!
//! The vector machinery is generic over the coordinate type (any signed
//! primitive integer, see [`Coord`]); the reduction picks the narrowest
//! width that provably holds every partial sum.

pub mod error;
pub mod ilp;
pub mod rng;
pub mod scalar;
pub mod toolkit;
pub mod vecdom;

pub use error::{Error, Result};
pub use ilp::{
    brute_force_feasibility, enumerate_left, enumerate_right, evaluate, optimize,
    solve_feasibility, split_variables, validate_no_overflow, Assignment, Constraint, DomainSpec,
    IlpInstance, OptimizeOutcome, ParamSpec, Preset, SolveOptions, SolveOutcome, Strategy,
    VariableSplit, Verdict,
};
pub use scalar::{Coord, CoordWidth};
pub use toolkit::{generate, parse, serialize, GenMode, GenSpec};
pub use vecdom::{
    brute_force_pair, default_params, dominates, find_dominating_pair, find_pair_any,
    find_pair_unequal, practical_params, split_by_first_coord, weighted_median, PairWitness,
    SolverParams, SplitOutcome, Stats, TaggedVector, TieRule, VectorSet,
};

/// Vector sets at the widths the reduction dispatches to.
pub type VectorSet16 = VectorSet<i16>;
pub type VectorSet32 = VectorSet<i32>;
pub type VectorSet64 = VectorSet<i64>;
pub type VectorSet128 = VectorSet<i128>;

pub type TaggedVector64 = TaggedVector<i64>;
pub type SplitOutcome64 = SplitOutcome<i64>;
