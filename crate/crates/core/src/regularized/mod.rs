//! Grid discretizations of the ε-regularized energies and their minimization.

mod energy;
mod field;
mod mollify;
mod projection;
mod solver;

pub use energy::{eval_e_eps, eval_v_eps, grad_e_eps, grad_v_eps, FoundationEnergy};
pub use field::{DiscreteField, FieldKind, TRANSITION_LEVEL};
pub(crate) use field::trapezoid;
pub use mollify::{
    mollify_sharp_candidate, mollify_with_profile, Mollified, OverlapWarning, SharpField,
    TransitionProfile, OVERLAP_SEPARATION,
};
pub use projection::{project_deformation, project_stretch};
pub use solver::{
    best_of, default_starts, initial_field, minimize, solve_all, Functional, Init, Problem,
    SolveResult, SolveSettings, Start,
};
