//! Computing solutions: the fixed-point operator, Newton collocation with
//! grid doubling, multi-start search and export of radial profiles.

mod banded;
mod grid;
mod multi;
mod newton;
mod operator;
mod radial;

pub use grid::GridFunction;
pub use multi::{
    classify, ladder_seeds, multi_solve, solve_from_constants, sweep_seeds, MultiSolve,
    SeedFailure, CONE_TOL, DEDUP_TOL,
};
pub use newton::{
    newton_solve, Region, SolutionPair, SolveOptions, NONCONSTANT_TOL, NONNEGATIVE_TOL, TRIVIAL_TOL,
};
pub use operator::{apply_t, picard_refine, DIVERGENCE_NORM, PANEL_POINTS};
pub use radial::{reconstruct_radial, RadialProfile, RadialRow, CSV_HEADER};
