use std::collections::BTreeMap;

use crate::comp::CompSeries;
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::field::{upoly, FieldElem};
use crate::series::{PerfExp, PerfSeries};

const MAX_HENSEL_ITERATIONS: usize = 64;

/// Which root of `a_0^(1/q) + a_0 = 0` starts the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Zero,
    Nonzero,
}

/// `dy = lambda (y o y) + sum_{k >= 1} p_k tau^k y + sum_{k >= 0} r_k t^(q^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiccatiProblem {
    pub lambda: PerfSeries,
    pub p: BTreeMap<i64, PerfSeries>,
    pub r: BTreeMap<i64, PerfSeries>,
    pub branch: Branch,
}

/// Per-coefficient record of the root extraction for `a_{l+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiccatiStep {
    /// Residual valuation before the first correction and after each one.
    pub valuations: Vec<PerfExp>,
    /// `alpha u - beta u^q - rhs` at the returned root.
    pub residual: PerfSeries,
}

/// `y = c t^(1/q) + sum_n a_n t^(q^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiccatiSolution {
    pub c: PerfSeries,
    pub a: Vec<PerfSeries>,
    /// `steps[l]` describes the computation of `a[l + 1]`.
    pub steps: Vec<RiccatiStep>,
}

impl RiccatiSolution {
    /// `y` as a composition series known through the last computed index.
    pub fn series(&self, ctx: &Ctx) -> CompSeries {
        let order = self.a.len() as i64 - 1;
        let terms = std::iter::once((-1, self.c.clone())).chain(self.a.iter().enumerate().map(|(n, a)| (n as i64, a.clone())));
        ctx.cs_from_terms(terms, Some(order))
    }
}

impl RiccatiProblem {
    fn validate(&self, ctx: &Ctx) -> Result<()> {
        let bound = PerfExp::from_ratio(1, (ctx.q() * ctx.q()) as i128, ctx.p())?;
        let check = |name: String, s: &PerfSeries| -> Result<()> {
            match s.val_lower() {
                Some(v) if v < bound => Err(Error::NotSolvable(format!("v({name}) = {v} is below 1/q^2"))),
                _ => Ok(()),
            }
        };
        if self.lambda.is_zero() {
            return Err(Error::NotSolvable("lambda must be nonzero".into()));
        }
        check("lambda".into(), &self.lambda)?;
        for (&k, pk) in &self.p {
            if k < 1 {
                return Err(Error::NotSolvable(format!("p_k needs k >= 1, got {k}")));
            }
            check(format!("p_{k}"), pk)?;
        }
        for (&k, rk) in &self.r {
            if k < 0 {
                return Err(Error::NotSolvable(format!("r_k needs k >= 0, got {k}")));
            }
            check(format!("r_{k}"), rk)?;
        }
        Ok(())
    }
}

impl Ctx {
    /// Computes `c` and `a_0 .. a_n`, each `a_{l+1}` to x-adic precision `xprec`.
    ///
    /// `c = lambda^-1 [-1]^(1/q)`. Matching the coefficient of `t^(q^l)` gives
    /// `alpha u - beta u^q = rhs` for `u = a_{l+1}^(1/q)`, with
    /// `alpha = [l+1]^(1/q) - lambda c`, `beta = lambda c^(q^(l+1))` and
    /// `rhs = lambda sum_{m+j=l} a_m a_j^(q^m) + sum_{k=1}^{l} p_k a_{l-k}^(q^k) + p_{l+1} c^(q^(l+1)) + r_l`.
    pub fn solve_riccati(&self, prob: &RiccatiProblem, n: i64, xprec: &PerfExp) -> Result<RiccatiSolution> {
        if n < 0 {
            return Err(Error::NotSolvable(format!("order must be >= 0, got {n}")));
        }
        if *xprec <= PerfExp::zero() {
            return Err(Error::NotSolvable(format!("xprec must be positive, got {xprec}")));
        }
        prob.validate(self)?;
        let wp = self.work_prec().ceil().max(2 * xprec.ceil() + 8);
        let ctx = self.with_work_prec(PerfExp::int(wp))?;
        let lambda = &prob.lambda;
        let c = ctx.ps_div(&ctx.ps_root_q(&ctx.bracket(-1)?)?, lambda)?;
        let lambda_c = ctx.ps_mul(lambda, &c);
        let a0 = match prob.branch {
            Branch::Zero => ctx.ps_zero(),
            Branch::Nonzero => ctx.ps_const(nonzero_branch_root(&ctx)?),
        };
        let mut a = vec![a0];
        let mut steps = Vec::with_capacity(n as usize);
        let zero = ctx.ps_zero();
        for l in 0..n {
            let c_frob = ctx.ps_frobenius(&c, l + 1)?;
            let alpha = ctx.ps_sub(&ctx.ps_root_q(&ctx.bracket(l + 1)?)?, &lambda_c);
            let beta = ctx.ps_mul(lambda, &c_frob);
            let mut quad = ctx.ps_zero();
            for m in 0..=l {
                let (am, aj) = (&a[m as usize], &a[(l - m) as usize]);
                if am.is_exact_zero() || aj.is_exact_zero() {
                    continue;
                }
                quad = ctx.ps_add(&quad, &ctx.ps_mul(am, &ctx.ps_frobenius(aj, m)?));
            }
            let mut rhs = ctx.ps_mul(lambda, &quad);
            for kk in 1..=l {
                if let Some(pk) = prob.p.get(&kk) {
                    rhs = ctx.ps_add(&rhs, &ctx.ps_mul(pk, &ctx.ps_frobenius(&a[(l - kk) as usize], kk)?));
                }
            }
            rhs = ctx.ps_add(&rhs, &ctx.ps_mul(prob.p.get(&(l + 1)).unwrap_or(&zero), &c_frob));
            rhs = ctx.ps_add(&rhs, prob.r.get(&l).unwrap_or(&zero));
            let rhs = ctx.ps_truncate(&rhs, xprec);
            let (u, valuations) = ctx.additive_root(&alpha, &beta, &rhs, xprec)?;
            let uq = ctx.ps_pow_p(&u, ctx.v() as i64)?;
            let residual = ctx.ps_sub(&ctx.ps_sub(&ctx.ps_mul(&alpha, &u), &ctx.ps_mul(&beta, &uq)), &rhs);
            steps.push(RiccatiStep { valuations, residual });
            a.push(uq);
        }
        Ok(RiccatiSolution { c, a, steps })
    }

    /// Small root of `alpha u - beta u^q = rhs` to precision `xprec`.
    ///
    /// Each correction `delta` solves `alpha delta - beta delta^q = g` for the
    /// current defect `g` (the map is additive). The first Newton-polygon
    /// segment from the constant point decides the step: if it ends at the
    /// linear point, `delta = g / alpha`; otherwise `delta = w x^mu` with
    /// `w` a root of the leading residue equation. Returns the root and the
    /// defect valuation before and after every correction.
    pub fn additive_root(
        &self,
        alpha: &PerfSeries,
        beta: &PerfSeries,
        rhs: &PerfSeries,
        xprec: &PerfExp,
    ) -> Result<(PerfSeries, Vec<PerfExp>)> {
        let q = self.q() as i128;
        let Some((va, abar)) = alpha.leading().cloned() else {
            return Err(Error::NotSolvable("linear coefficient of the additive equation is zero".into()));
        };
        let lead_b = beta.leading().cloned();
        let mut u = self.ps_zero();
        let mut g = rhs.clone();
        let mut vals: Vec<PerfExp> = Vec::new();
        for _ in 0..=MAX_HENSEL_ITERATIONS {
            let Some(vg) = g.val_lower() else {
                return Ok((u, vals));
            };
            if vals.last().is_some_and(|prev| vg <= *prev) {
                return Err(Error::NonConvergent(format!("defect valuation stalled at {vg}")));
            }
            vals.push(vg.clone());
            if vg >= *xprec {
                return Ok((u, vals));
            }
            let Some((eg, gbar)) = g.leading().cloned() else {
                return Err(Error::PrecisionExhausted(format!("defect known only to O(x^{vg}), need {xprec}")));
            };
            let s1 = &va - &eg;
            let delta = match &lead_b {
                Some((vb, bbar)) if (vb - &eg).ratio() / q <= s1.ratio() => {
                    let mu = (vb - &eg).div_int(-q);
                    let on_segment = (vb - &eg).ratio() / q == s1.ratio();
                    let a_res = if on_segment { abar } else { FieldElem::ZERO };
                    let w = residue_root(self, a_res, *bbar, gbar)?;
                    self.ps_from_terms([(mu, w)], None)?
                }
                _ => self.ps_truncate(&self.ps_div(&g, alpha)?, xprec),
            };
            let dq = self.ps_pow_p(&delta, self.v() as i64)?;
            g = self.ps_add(&self.ps_sub(&g, &self.ps_mul(alpha, &delta)), &self.ps_mul(beta, &dq));
            g = self.ps_truncate(&g, xprec);
            u = self.ps_add(&u, &delta);
        }
        Err(Error::NonConvergent(format!("no convergence after {MAX_HENSEL_ITERATIONS} corrections")))
    }
}

/// Least `w` (by element index) with `a w - b w^q = g`.
fn residue_root(ctx: &Ctx, a: FieldElem, b: FieldElem, g: FieldElem) -> Result<FieldElem> {
    let k = ctx.field();
    let v = ctx.v() as i64;
    for w in k.elements() {
        if k.sub(k.mul(a, w), k.mul(b, k.frob_p(w, v))) == g {
            return Ok(w);
        }
    }
    let mut poly = vec![FieldElem::ZERO; ctx.q() as usize + 1];
    poly[0] = k.neg(g);
    poly[1] = a;
    poly[ctx.q() as usize] = k.neg(b);
    Err(Error::NeedsFieldExtension { degree: upoly::min_root_degree(k, &poly) })
}

/// Least nonzero root of `a^(q-1) = -1`.
fn nonzero_branch_root(ctx: &Ctx) -> Result<FieldElem> {
    let k = ctx.field();
    let target = k.neg(k.one());
    let q = ctx.q();
    if let Some(w) = k.elements().skip(1).find(|&w| k.pow(w, q - 1) == target) {
        return Ok(w);
    }
    let mut poly = vec![FieldElem::ZERO; q as usize];
    poly[0] = k.one();
    poly[q as usize - 1] = k.one();
    Err(Error::NeedsFieldExtension { degree: upoly::min_root_degree(k, &poly) })
}
