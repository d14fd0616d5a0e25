//! Completed and Dirichlet L-functions of meromorphic quasi-modular forms via the explicit formula.

pub mod context;
pub mod g;
pub mod lambda;
pub mod verify;

pub use context::{LConfig, LContext};
pub use g::g_function;
pub use lambda::{dirichlet_l, lambda, residue, LValueReport};
pub use verify::{residue_by_contour, verify_functional_equation, verify_shift};
