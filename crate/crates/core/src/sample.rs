//! Seeded random generators for elements, series and admissible problems.
//!
//! Used by the property tests, the acceptance suite and the benches; the
//! generators only produce inputs that satisfy each solver's preconditions.

use std::collections::BTreeMap;

use rand::Rng;

use crate::comp::CompSeries;
use crate::ctx::Ctx;
use crate::field::FieldElem;
use crate::series::{PerfExp, PerfSeries};
use crate::solvers::{Branch, ImplicitProblem, OdeProblem, RiccatiProblem};

/// Shape of random perfection series: `terms` monomials with exponents
/// `min_val + i / p^den_exp` for `0 <= i < spread * p^den_exp`.
#[derive(Debug, Clone, Copy)]
pub struct SeriesShape {
    pub min_val: i128,
    pub spread: i128,
    pub terms: usize,
    pub den_exp: u32,
}

impl Default for SeriesShape {
    fn default() -> Self {
        Self { min_val: 0, spread: 3, terms: 2, den_exp: 1 }
    }
}

pub fn elem<R: Rng>(ctx: &Ctx, rng: &mut R) -> FieldElem {
    FieldElem(rng.gen_range(0..ctx.field().size()))
}

pub fn nonzero_elem<R: Rng>(ctx: &Ctx, rng: &mut R) -> FieldElem {
    FieldElem(rng.gen_range(1..ctx.field().size()))
}

/// Exact series; may be zero.
pub fn series<R: Rng>(ctx: &Ctx, rng: &mut R, shape: SeriesShape) -> PerfSeries {
    let den = (ctx.p() as i128).pow(shape.den_exp);
    let terms: Vec<_> = (0..shape.terms)
        .map(|_| {
            let i = rng.gen_range(0..(shape.spread * den).max(1));
            let e = PerfExp::from_ratio(shape.min_val * den + i, den, ctx.p()).expect("valid exponent");
            (e, elem(ctx, rng))
        })
        .collect();
    ctx.ps_from_terms(terms, None).expect("valid terms")
}

/// Exact series with valuation exactly `shape.min_val`.
pub fn series_with_valuation<R: Rng>(ctx: &Ctx, rng: &mut R, shape: SeriesShape) -> PerfSeries {
    let lead = ctx.ps_monomial(nonzero_elem(ctx, rng), PerfExp::int(shape.min_val));
    let rest = series(ctx, rng, SeriesShape { min_val: shape.min_val + 1, ..shape });
    ctx.ps_add(&lead, &rest)
}

/// Exact composition series over indices `lo..=hi`; each index is present
/// with probability `density`.
pub fn comp<R: Rng>(ctx: &Ctx, rng: &mut R, lo: i64, hi: i64, density: f64, shape: SeriesShape) -> CompSeries {
    let mut terms = Vec::new();
    for k in lo..=hi {
        if rng.gen_bool(density) {
            terms.push((k, series(ctx, rng, shape)));
        }
    }
    ctx.cs_from_terms(terms, None)
}

/// Exact unit: nonzero coefficient at index 0, random ones up to `hi`.
pub fn unit<R: Rng>(ctx: &Ctx, rng: &mut R, hi: i64, shape: SeriesShape) -> CompSeries {
    let head = ctx.cs_monomial(0, series_with_valuation(ctx, rng, shape));
    ctx.cs_add(&head, &comp(ctx, rng, 1, hi, 0.6, shape))
}

/// Nonzero exact series whose leading index is `lo`.
pub fn comp_with_lead<R: Rng>(ctx: &Ctx, rng: &mut R, lo: i64, hi: i64, shape: SeriesShape) -> CompSeries {
    let head = ctx.cs_monomial(lo, series_with_valuation(ctx, rng, shape));
    ctx.cs_add(&head, &comp(ctx, rng, lo + 1, hi, 0.6, shape))
}

/// Admissible implicit problem with shift `nu` and up to `kmax`-fold compositions.
pub fn implicit_problem<R: Rng>(ctx: &Ctx, rng: &mut R, nu: i64, kmax: usize) -> ImplicitProblem {
    let shape = SeriesShape::default();
    let p0 = comp(ctx, rng, 2 * nu + 1, 2 * nu + 4, 0.7, shape);
    let p1 = ctx.cs_compose(&unit(ctx, rng, 3, shape), &ctx.cs_monomial(nu, ctx.ps_one())).expect("exact");
    let mut p = vec![p0, p1];
    for _ in 2..=kmax {
        p.push(comp(ctx, rng, 0, 3, 0.5, shape));
    }
    ImplicitProblem::new(p, nu)
}

/// Finitely supported ODE with integral coefficients, `j <= jmax`, `k <= kmax`.
pub fn ode_problem<R: Rng>(ctx: &Ctx, rng: &mut R, jmax: i64, kmax: u32) -> OdeProblem {
    let shape = SeriesShape::default();
    let count = rng.gen_range(2..=5);
    let mut a = vec![((0, 0), series_with_valuation(ctx, rng, shape))];
    for _ in 0..count {
        let key = (rng.gen_range(0..=jmax), rng.gen_range(0..=kmax));
        a.push((key, series(ctx, rng, shape)));
    }
    OdeProblem::new(a).expect("valid indices")
}

/// Riccati problem with `v(lambda) = 1/q^2` exactly and branch zero.
///
/// In characteristic 2 the residue map `w -> w + w^q` vanishes on `F_q`, so
/// perturbations there get valuation `> 1/q^2`; otherwise valuation
/// `1/q^2` itself is allowed.
pub fn riccati_problem<R: Rng>(ctx: &Ctx, rng: &mut R, kmax: i64) -> RiccatiProblem {
    let p = ctx.p();
    let q2 = (ctx.q() * ctx.q()) as i128;
    let base = PerfExp::from_ratio(1, q2, p).expect("valid");
    let lead = ctx.ps_monomial(nonzero_elem(ctx, rng), base.clone());
    let tail = ctx.ps_shift(&series(ctx, rng, SeriesShape { min_val: 0, spread: 2, terms: 1, den_exp: 1 }), &PerfExp::int(1));
    let lambda = ctx.ps_add(&lead, &tail);
    let perturb_min = if p == 2 { PerfExp::from_ratio(2, q2, p).expect("valid") } else { base };
    let perturb = |rng: &mut R| {
        let s = series(ctx, rng, SeriesShape { min_val: 0, spread: 2, terms: 2, den_exp: 1 });
        ctx.ps_shift(&s, &perturb_min)
    };
    let mut pk = BTreeMap::new();
    let mut rk = BTreeMap::new();
    for k in 0..=kmax {
        if k >= 1 && rng.gen_bool(0.5) {
            pk.insert(k, perturb(rng));
        }
        if rng.gen_bool(0.5) {
            rk.insert(k, perturb(rng));
        }
    }
    pk.retain(|_, c: &mut PerfSeries| !c.is_exact_zero());
    rk.retain(|_, c: &mut PerfSeries| !c.is_exact_zero());
    RiccatiProblem { lambda, p: pk, r: rk, branch: Branch::Zero }
}
