//! The Carlitz operators: `tau`, `Delta`, `d = q-th root o Delta`, and the
//! brackets `[k] = x^(q^k) - x`.
//!
//! `Delta u (t) = u(xt) - x u(t)` acts diagonally on `c_k t^(q^k)` with
//! eigenvalue `[k]`, so both `Delta` and `d` are computed coefficientwise.

use crate::comp::{scale_q, CompSeries};
use crate::ctx::Ctx;
use crate::error::Result;
use crate::series::{PerfExp, PerfSeries};

impl Ctx {
    /// `[k] = x^(q^k) - x`; zero for `k = 0`.
    pub fn bracket(&self, k: i64) -> Result<PerfSeries> {
        let e = scale_q(self, &PerfExp::int(1), k)?;
        let one = self.field().one();
        let xqk = self.ps_from_terms([(e, one)], None)?;
        Ok(self.ps_sub(&xqk, &self.ps_x()))
    }

    /// `tau^j u = u^(q^j)`.
    pub fn tau_power(&self, u: &CompSeries, j: i64) -> Result<CompSeries> {
        self.cs_tau(u, j)
    }

    /// `Delta u`: coefficient `c_k` becomes `[k] c_k`.
    pub fn carlitz_delta(&self, u: &CompSeries) -> Result<CompSeries> {
        let mut terms = Vec::with_capacity(u.terms().len());
        for (&k, c) in u.terms() {
            terms.push((k, self.ps_mul(&self.bracket(k)?, c)));
        }
        Ok(self.cs_from_terms(terms, u.order()))
    }

    /// `d u`: coefficient `c_k` at index `k` becomes `([k] c_k)^(1/q)` at `k - 1`.
    pub fn carlitz_d(&self, u: &CompSeries) -> Result<CompSeries> {
        let mut terms = Vec::with_capacity(u.terms().len());
        for (&k, c) in u.terms() {
            let dk = self.ps_root_q(&self.ps_mul(&self.bracket(k)?, c))?;
            terms.push((k - 1, dk));
        }
        Ok(self.cs_from_terms(terms, u.order().map(|n| n - 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::growth_certificate;

    fn frac(ctx: &Ctx, n: i128, d: i128) -> PerfExp {
        PerfExp::from_ratio(n, d, ctx.p()).unwrap()
    }

    fn xs(ctx: &Ctx, exps: &[(i128, i128)]) -> PerfSeries {
        let one = ctx.field().one();
        ctx.ps_from_terms(exps.iter().map(|&(n, d)| (frac(ctx, n, d), one)), None).unwrap()
    }

    #[test]
    fn brackets() {
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        assert_eq!(ctx.bracket(1).unwrap(), xs(&ctx, &[(1, 1), (2, 1)]));
        assert!(ctx.bracket(0).unwrap().is_exact_zero());
        assert_eq!(ctx.bracket(-1).unwrap(), xs(&ctx, &[(1, 2), (1, 1)]));
        for k in 1..5 {
            assert_eq!(ctx.bracket(k).unwrap().leading().unwrap().0, PerfExp::int(1));
        }
    }

    #[test]
    fn tau_examples() {
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        let t = ctx.cs_identity();
        assert_eq!(ctx.tau_power(&t, 1).unwrap(), ctx.cs_monomial(1, ctx.ps_one()));
        let c = xs(&ctx, &[(1, 1), (3, 2)]);
        let u = ctx.cs_monomial(1, c.clone());
        let expect = ctx.cs_monomial(2, ctx.ps_frobenius(&c, 1).unwrap());
        assert_eq!(ctx.tau_power(&u, 1).unwrap(), expect);
    }

    #[test]
    fn tau_is_pointwise_power() {
        let ctx = Ctx::for_q(3, 1, 1).unwrap();
        let u = ctx.cs_from_terms([(0, ctx.ps_x()), (1, ctx.ps_int(2)), (2, xs(&ctx, &[(0, 1), (2, 1)]))], None);
        let tu = ctx.tau_power(&u, 1).unwrap();
        let t0 = xs(&ctx, &[(1, 1), (4, 1)]);
        let c1 = growth_certificate(&ctx, &u).unwrap();
        let c2 = growth_certificate(&ctx, &tu).unwrap();
        let lhs = ctx.cs_eval(&tu, &t0, &c2).unwrap();
        let rhs = ctx.ps_pow(&ctx.cs_eval(&u, &t0, &c1).unwrap(), 3);
        assert!(ctx.ps_eq_mod(&lhs, &rhs));
    }

    #[test]
    fn delta_and_d_examples() {
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        let t = ctx.cs_identity();
        assert!(ctx.carlitz_delta(&t).unwrap().is_zero());
        assert!(ctx.carlitz_d(&t).unwrap().is_zero());
        let t2 = ctx.cs_monomial(1, ctx.ps_one());
        assert_eq!(ctx.carlitz_d(&t2).unwrap(), ctx.cs_monomial(0, xs(&ctx, &[(1, 2), (1, 1)])));
        let t3 = ctx.cs_monomial(3, ctx.ps_one());
        assert_eq!(ctx.carlitz_delta(&t3).unwrap(), ctx.cs_monomial(3, ctx.bracket(3).unwrap()));
        // c t^(1/q) with c = x: d gives c^(1/q) [-1]^(1/q) t^(q^-2)
        let c = ctx.ps_x();
        let mero = ctx.cs_monomial(-1, c.clone());
        let expect = ctx.ps_root_q(&ctx.ps_mul(&c, &ctx.bracket(-1).unwrap())).unwrap();
        assert_eq!(ctx.carlitz_d(&mero).unwrap(), ctx.cs_monomial(-2, expect));
        assert_eq!(
            ctx.carlitz_delta(&mero).unwrap(),
            ctx.cs_monomial(-1, ctx.ps_mul(&c, &ctx.bracket(-1).unwrap()))
        );
    }

    #[test]
    fn delta_matches_pointwise_definition() {
        let ctx = Ctx::for_q(2, 1, 1).unwrap();
        let u = ctx.cs_from_terms([(-1, ctx.ps_x()), (0, ctx.ps_one()), (2, xs(&ctx, &[(0, 1), (1, 1)]))], None);
        let du = ctx.carlitz_delta(&u).unwrap();
        let t0 = xs(&ctx, &[(2, 1), (5, 1)]);
        let cu = growth_certificate(&ctx, &u).unwrap();
        let cd = growth_certificate(&ctx, &du).unwrap();
        let lhs = ctx.cs_eval(&du, &t0, &cd).unwrap();
        let shifted = ctx.ps_mul(&ctx.ps_x(), &t0);
        let rhs = ctx.ps_sub(
            &ctx.cs_eval(&u, &shifted, &cu).unwrap(),
            &ctx.ps_mul(&ctx.ps_x(), &ctx.cs_eval(&u, &t0, &cu).unwrap()),
        );
        assert!(ctx.ps_eq_mod(&lhs, &rhs));
    }
}
