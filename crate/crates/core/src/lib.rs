//! Exact arithmetic for F_q-linear composition series over the perfected
//! function field `F_{q^s}((x))^perf`, the Carlitz derivative, and
//! coefficient-recursion solvers for implicit, ODE and Riccati equations.

pub mod ctx;
pub mod error;
pub mod field;
pub mod series;

pub use ctx::Ctx;
pub use error::{Error, Result};
pub use field::{FieldConfig, FieldElem, FiniteField};
pub use series::{PerfExp, PerfSeries, Valuation};
pub mod batch;
pub mod carlitz;
pub mod certificate;
pub mod comp;
pub mod sample;
pub mod solvers;
pub mod units;

pub use certificate::{growth_certificate, GrowthCertificate};
pub use comp::{multinomial_coeff, CompSeries};
pub use solvers::{Branch, Equation, ImplicitProblem, OdeProblem, RiccatiProblem, RiccatiSolution, RiccatiStep, TimeChange};
pub use units::{OreFraction, UnitFactorization};
