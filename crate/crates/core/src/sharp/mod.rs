//! Sharp-interface functionals, their exact minimizers and the crack-count
//! law.

mod brute_force;
mod energy;
mod fields;
mod minimizer;
mod reconstruct;

pub use brute_force::{
    alternating_energy, brute_force_segments, brute_force_segments_with_budget, SegmentSearch,
    DEFAULT_EVALUATION_BUDGET,
};
pub use energy::{eval_i, eval_v, segment_energy};
pub use fields::{PiecewiseConstantField, PiecewiseLinearField, SlopeClass, FEASIBILITY_TOL};
pub use minimizer::{
    bracket_argument, build_sharp_minimizer, crack_count, segment_h1, segment_h2, v_n, Crack,
    SharpMinimizer, Variant,
};
pub use reconstruct::{reconstruct_deformation, DeformationGraph, GraphPiece, Jump};
