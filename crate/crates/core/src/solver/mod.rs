//! Solving x-inverse problems and certifying injectivity of x.

pub mod injectivity;
pub mod solve;

pub use injectivity::{injectivity_witness, InjectivityReport};
pub use solve::{decay_fit, expand_solution, solve_x_inverse, DecayFit, SolveOptions, SolveReport};
