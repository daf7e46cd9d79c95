use std::collections::BTreeMap;

use crate::certificate::{growth_certificate, GrowthCertificate};
use crate::comp::{scale_q, CompSeries};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::series::{PerfExp, PerfSeries};

use super::table::SelfCompTable;

/// `dz = sum_{j, k} a_jk tau^j(z^(k))`, where `z^(0) = t` so the `k = 0`
/// column is the inhomogeneous part `sum_j a_j0 t^(q^j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OdeProblem {
    pub a: BTreeMap<(i64, u32), PerfSeries>,
}

/// Scalar time change `z'(t) = gamma^-1 z(gamma t)` with `gamma = x^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeChange {
    pub e: i64,
    pub gamma: PerfSeries,
}

impl OdeProblem {
    pub fn new(a: impl IntoIterator<Item = ((i64, u32), PerfSeries)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((j, k), c) in a {
            if j < 0 {
                return Err(Error::NotSolvable(format!("tau power j must be >= 0, got {j}")));
            }
            if !c.is_exact_zero() {
                map.insert((j, k), c);
            }
        }
        Ok(Self { a: map })
    }

    fn kmax(&self) -> u32 {
        self.a.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }
}

impl Ctx {
    /// Solves the ODE with `z = sum_{i >= 1} c_i t^(q^i)`.
    ///
    /// Matching the coefficient of `t^(q^i)` gives
    /// `c_{i+1} = [i+1]^-1 (sum_{j + l = i} sum_k a_jk M(l, k)^(q^j))^q`.
    /// The returned series is known through index `n + 1`, which determines
    /// `dz` and hence the residual through index `n`.
    pub fn solve_ode(&self, prob: &OdeProblem, n: i64) -> Result<(CompSeries, GrowthCertificate)> {
        if n < 1 {
            return Err(Error::NotSolvable(format!("order must be >= 1, got {n}")));
        }
        let mut table = SelfCompTable::new(self, 1, prob.kmax().max(2));
        table.push(self.ps_zero());
        for i in 0..=n {
            let mut rhs = self.ps_zero();
            for (&(j, k), ajk) in prob.a.range((0, 0)..=(i, u32::MAX)) {
                let l = i - j;
                let m = table.get(l, k)?;
                if m.is_exact_zero() {
                    continue;
                }
                rhs = self.ps_add(&rhs, &self.ps_mul(ajk, &self.ps_frobenius(&m, j)?));
            }
            let c = self.ps_div(&self.ps_pow_p(&rhs, self.v() as i64)?, &self.bracket(i + 1)?)?;
            table.push(c);
        }
        let z = self.cs_from_terms((1..=n + 1).map(|i| (i, table.coeff(i))), Some(n + 1));
        let cert = growth_certificate(self, &z)?;
        Ok((z, cert))
    }

    /// Conjugates by `gamma t` so every `a_j0` becomes integral.
    ///
    /// Under `z'(t) = gamma^-1 z(gamma t)` each coefficient transforms as
    /// `a'_jk = gamma^(q^j - 1/q) a_jk`; `e` is the least integer `>= 0` with
    /// `v(a'_j0) >= 0` for all `j`.
    pub fn normalize_time_change(&self, prob: &OdeProblem) -> Result<(OdeProblem, TimeChange)> {
        let inv_q = PerfExp::from_ratio(1, self.q() as i128, self.p())?;
        let mut e: i128 = 0;
        for (&(j, k), a) in &prob.a {
            if k != 0 {
                continue;
            }
            let Some(v) = a.val_lower() else { continue };
            if !v.is_negative() {
                continue;
            }
            let w = &scale_q(self, &PerfExp::int(1), j)? - &inv_q;
            let need = (-&v).ratio() / w.ratio();
            e = e.max(need.ceil().to_integer());
        }
        let e = i64::try_from(e).map_err(|_| Error::ExponentOverflow)?;
        let gamma = self.ps_monomial(self.field().one(), PerfExp::int(e as i128));
        let mut a = BTreeMap::new();
        for (&(j, k), c) in &prob.a {
            let w = &scale_q(self, &PerfExp::int(1), j)? - &inv_q;
            let shift = w.checked_mul_int(e as i128)?;
            a.insert((j, k), self.ps_shift(c, &shift));
        }
        Ok((OdeProblem { a }, TimeChange { e, gamma }))
    }

    /// Maps a solution of the normalized problem back: `z = (gamma t) o z' o (gamma^-1 t)`,
    /// coefficientwise `c_k = gamma^(1 - q^k) c'_k`.
    pub fn undo_time_change(&self, z: &CompSeries, tc: &TimeChange) -> Result<CompSeries> {
        let mut terms = Vec::with_capacity(z.terms().len());
        for (&k, c) in z.terms() {
            let shift = (&PerfExp::int(1) - &scale_q(self, &PerfExp::int(1), k)?).checked_mul_int(tc.e as i128)?;
            terms.push((k, self.ps_shift(c, &shift)));
        }
        Ok(self.cs_from_terms(terms, z.order()))
    }
}
