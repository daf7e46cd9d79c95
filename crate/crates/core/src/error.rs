use thiserror::Error;

/// Failures raised by kernel operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("perfection depth exceeded: exponent denominator p^{needed} above cap p^{cap}")]
    PerfectionDepthExceeded { needed: u32, cap: u32 },
    #[error("needs a residue field extension of degree {degree} over the configured field")]
    NeedsFieldExtension { degree: u32 },
    #[error("point outside the certified convergence domain: v(t0) = {valuation} <= kappa = {kappa}")]
    OutsideConvergenceDomain { valuation: String, kappa: String },
    #[error("zero input")]
    ZeroInput,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("not solvable: {0}")]
    NotSolvable(String),
    #[error("non-convergent: {0}")]
    NonConvergent(String),
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),
    #[error("exponent arithmetic overflow")]
    ExponentOverflow,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
