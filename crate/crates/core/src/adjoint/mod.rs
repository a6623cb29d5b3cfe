//! Explicit Runge–Kutta integration with its exact discrete adjoint, used to
//! check that every checkpointing policy yields the same gradient.

mod engine;
mod erk;
mod problem;
mod tableau;

pub use engine::{
    finite_difference_gradient, gradient_via_policy, relative_error, scheme_of, AdjointEngine, GradientReport,
};
pub use erk::{erk_adjoint_step, erk_step, integrate, StageSet};
pub use problem::{GrayScott1d, Linear2d, LinearScalar, Objective, OdeProblem, OdeSystem, PROBLEM_NAMES};
pub use tableau::ButcherTableau;
