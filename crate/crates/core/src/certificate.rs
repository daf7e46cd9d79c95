//! Growth certificates: a witnessed `kappa >= 0` with `v(c_n) >= -kappa q^n`
//! over the verified index range, i.e. `|c_n| <= C^(q^n)` for `C = q^kappa`.
//! Series with such a certificate converge wherever `v(t) > kappa`.

use crate::comp::{scale_q, CompSeries};
use crate::ctx::Ctx;
use crate::error::Result;
use crate::series::PerfExp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    kappa: PerfExp,
    /// Largest index verified.
    range: i64,
}

impl GrowthCertificate {
    pub fn new(kappa: PerfExp, range: i64) -> Self {
        Self { kappa, range }
    }

    pub fn kappa(&self) -> &PerfExp {
        &self.kappa
    }

    pub fn range(&self) -> i64 {
        self.range
    }

    /// `q^n (v - kappa)`: lower bound on the valuation of `c_n t^(q^n)` when
    /// `v(t) = v`. `None` if the exponent arithmetic overflows.
    pub fn tail_bound(&self, ctx: &Ctx, n: i64, v: &PerfExp) -> Option<PerfExp> {
        scale_q(ctx, &(v - &self.kappa), n).ok()
    }

    /// Whether every nonnegative-index coefficient of `a` satisfies the bound
    /// and the verified range reaches the last known index.
    pub fn covers(&self, ctx: &Ctx, a: &CompSeries) -> Result<bool> {
        let last = a.order().or(a.max_k()).unwrap_or(0);
        if last > self.range {
            return Ok(false);
        }
        for (&n, c) in a.terms() {
            if n < 0 {
                continue;
            }
            let Some(v) = c.val_lower() else { continue };
            let bound = -&scale_q(ctx, &self.kappa, n)?;
            if v < bound {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `kappa = max(0, max_n -v(c_n) / q^n)` over the nonnegative indices of `a`.
/// Principal-part terms (negative indices) are finitely many and do not
/// affect convergence.
pub fn growth_certificate(ctx: &Ctx, a: &CompSeries) -> Result<GrowthCertificate> {
    let mut kappa = PerfExp::zero();
    for (&n, c) in a.terms() {
        if n < 0 {
            continue;
        }
        let Some(v) = c.val_lower() else { continue };
        if v.is_negative() {
            let cand = scale_q(ctx, &(-&v), -n)?;
            if cand > kappa {
                kappa = cand;
            }
        }
    }
    let range = a.order().or(a.max_k()).unwrap_or(0);
    Ok(GrowthCertificate { kappa, range })
}
