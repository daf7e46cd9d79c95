use crate::certificate::{growth_certificate, GrowthCertificate};
use crate::comp::CompSeries;
use crate::ctx::Ctx;
use crate::error::{Error, Result};

use super::table::SelfCompTable;

/// `P_0 + P_1 o z + P_2 o z o z + ... = 0`, solved for `z = sum_{i > nu} c_i t^(q^i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicitProblem {
    /// `p[k]` is the coefficient series of the `k`-fold composition.
    pub p: Vec<CompSeries>,
    pub nu: i64,
}

impl ImplicitProblem {
    pub fn new(p: Vec<CompSeries>, nu: i64) -> Self {
        Self { p, nu }
    }

    fn validate(&self) -> Result<()> {
        if self.nu < 0 {
            return Err(Error::NotSolvable(format!("shift nu must be >= 0, got {}", self.nu)));
        }
        if self.p.len() < 2 {
            return Err(Error::NotSolvable("missing linear coefficient P_1".into()));
        }
        for (k, pk) in self.p.iter().enumerate() {
            if pk.terms().keys().next().is_some_and(|&i| i < 0) {
                return Err(Error::NotSolvable(format!("P_{k} has a negative index")));
            }
        }
        match self.p[1].min_k() {
            Some(m) if m == self.nu => {}
            Some(m) => {
                return Err(Error::NotSolvable(format!("P_1 leads at index {m}, expected nu = {}", self.nu)));
            }
            None => return Err(Error::NotSolvable("P_1 is zero".into())),
        }
        if let Some(i) = self.p[0].min_k().filter(|&i| i <= 2 * self.nu) {
            return Err(Error::NotSolvable(format!(
                "P_0 has a nonzero coefficient at index {i} <= 2 nu = {}",
                2 * self.nu
            )));
        }
        Ok(())
    }
}

impl Ctx {
    /// Solves the implicit equation through index `n`.
    ///
    /// With `P_1 = u o t^(q^nu)` and `Q_k = u^-1 o P_k` the equation reads
    /// `tau^nu z = -Q_0 - sum_{k >= 2} Q_k o z^(k)`, and matching the
    /// coefficient of `t^(q^(i + nu))` gives `c_i^(q^nu)` from `c_1 .. c_{i-1}`.
    pub fn solve_implicit(&self, prob: &ImplicitProblem, n: i64) -> Result<(CompSeries, GrowthCertificate)> {
        if n < 1 {
            return Err(Error::NotSolvable(format!("order must be >= 1, got {n}")));
        }
        prob.validate()?;
        let nu = prob.nu;
        let top = n + nu;
        let unit = self.factor_unit(&prob.p[1])?.unit;
        let uinv = self.invert_unit(&unit, top)?;
        let q: Vec<CompSeries> = prob
            .p
            .iter()
            .map(|pk| Ok(self.cs_truncate(&self.cs_compose(&uinv, pk)?, top)))
            .collect::<Result<_>>()?;
        let kmax = (q.len() - 1).max(2) as u32;
        let lo = nu + 1;
        let mut table = SelfCompTable::new(self, lo, kmax);
        for _ in 0..lo {
            table.push(self.ps_zero());
        }
        for i in lo..=n {
            let idx = i + nu;
            let mut acc = match q[0].coeff(idx) {
                Some(c) => self.ps_neg(c),
                None => self.ps_zero(),
            };
            for (k, qk) in q.iter().enumerate().skip(2) {
                // (Q_k o z^(k))_idx = sum_j (Q_k)_j * M(idx - j, k)^(q^j)
                for (&j, qkj) in qk.terms().range(..=idx - k as i64 * lo) {
                    let m = table.get(idx - j, k as u32)?;
                    if m.is_exact_zero() {
                        continue;
                    }
                    acc = self.ps_sub(&acc, &self.ps_mul(qkj, &self.ps_frobenius(&m, j)?));
                }
            }
            table.push(self.ps_frobenius(&acc, -nu)?);
        }
        let z = self.cs_from_terms((lo..=n).map(|i| (i, table.coeff(i))), Some(n));
        let cert = growth_certificate(self, &z)?;
        Ok((z, cert))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::PerfSeries;

    fn one(ctx: &Ctx) -> PerfSeries {
        ctx.ps_one()
    }

    #[test]
    fn golden_z_plus_z_of_z() {
        // z + z o z = t^2 over F_2: P_0 = -t^2, P_1 = t, P_2 = t.
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        let p0 = ctx.cs_monomial(1, ctx.ps_int(-1));
        let p1 = ctx.cs_identity();
        let p2 = ctx.cs_identity();
        let prob = ImplicitProblem::new(vec![p0, p1, p2], 0);
        let (z, cert) = ctx.solve_implicit(&prob, 4).unwrap();
        let want: Vec<i64> = vec![1, 1, 0, 1];
        for (i, w) in want.iter().enumerate() {
            let c = z.coeff(i as i64 + 1).cloned().unwrap_or_else(|| ctx.ps_zero());
            assert_eq!(c, ctx.ps_int(*w), "c_{}", i + 1);
        }
        assert_eq!(cert.kappa(), &crate::series::PerfExp::zero());
    }

    #[test]
    fn zero_data_gives_zero() {
        let ctx = Ctx::for_q(3, 1, 1).unwrap();
        let prob = ImplicitProblem::new(vec![ctx.cs_zero(), ctx.cs_identity(), ctx.cs_identity()], 0);
        let (z, _) = ctx.solve_implicit(&prob, 6).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn linear_case_is_minus_p0() {
        let ctx = Ctx::for_q(3, 1, 1).unwrap();
        let x = ctx.ps_x();
        let p0 = ctx.cs_from_terms([(1, x.clone()), (3, one(&ctx))], None);
        let prob = ImplicitProblem::new(vec![p0.clone(), ctx.cs_identity()], 0);
        let (z, _) = ctx.solve_implicit(&prob, 5).unwrap();
        assert!(ctx.cs_eq_mod(&z, &ctx.cs_neg(&p0)));
    }

    #[test]
    fn shifted_case_starts_after_nu() {
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        let x = ctx.ps_x();
        let p1 = ctx.cs_from_terms([(1, x.clone()), (2, one(&ctx))], None);
        let p0 = ctx.cs_from_terms([(3, one(&ctx)), (4, x.clone())], None);
        let p2 = ctx.cs_identity();
        let prob = ImplicitProblem::new(vec![p0, p1, p2], 1);
        let (z, _) = ctx.solve_implicit(&prob, 8).unwrap();
        assert_eq!(z.min_k(), Some(2));
        let r = ctx.residual_implicit(&prob, &z, 8).unwrap();
        assert!(r.is_zero(), "{r:?}");
    }

    #[test]
    fn preconditions_are_checked() {
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        let bad_p0 = ctx.cs_identity();
        let prob = ImplicitProblem::new(vec![bad_p0, ctx.cs_identity()], 0);
        assert!(matches!(ctx.solve_implicit(&prob, 4), Err(Error::NotSolvable(_))));
        let prob = ImplicitProblem::new(vec![ctx.cs_zero(), ctx.cs_monomial(1, ctx.ps_one())], 0);
        assert!(matches!(ctx.solve_implicit(&prob, 4), Err(Error::NotSolvable(_))));
    }
}
