//! Coefficient-recursion solvers: implicit equations `sum_k P_k o z^(k) = 0`,
//! Carlitz ODEs `dz = sum a_jk tau^j(z^(k))`, and Riccati-type equations
//! `dy = lambda (y o y) + P(tau) y + R`.
//!
//! Every solver is a pure function of its problem and returns data that the
//! matching `residual_*` function can check independently.

mod implicit;
mod ode;
mod residual;
mod riccati;
mod table;

pub use implicit::ImplicitProblem;
pub use ode::{OdeProblem, TimeChange};
pub use residual::Equation;
pub use riccati::{Branch, RiccatiProblem, RiccatiSolution, RiccatiStep};
pub use table::SelfCompTable;
