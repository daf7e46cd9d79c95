//! Units of the composition ring, the left Ore common multiple, and the
//! normal form `t^(q^-m) o a'` of left fractions `c^-1 o d`.

use crate::comp::CompSeries;
use crate::ctx::Ctx;
use crate::error::{Error, Result};

/// A left fraction `denom^-1 o numer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreFraction {
    pub denom: CompSeries,
    pub numer: CompSeries,
}

/// `c = unit o t^(q^m)` with `unit` invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitFactorization {
    pub m: i64,
    pub unit: CompSeries,
}

impl Ctx {
    /// Splits off the leading power: `c = unit o t^(q^m)` where `unit_l = c_(m+l)`.
    pub fn factor_unit(&self, c: &CompSeries) -> Result<UnitFactorization> {
        let m = c.min_k().ok_or(Error::ZeroInput)?;
        if m < 0 {
            return Err(Error::NotSolvable(format!("factor_unit needs min index >= 0, got {m}")));
        }
        let unit = self.cs_from_terms(
            c.terms().iter().filter(|(k, _)| **k >= m).map(|(k, v)| (k - m, v.clone())),
            c.order().map(|n| n - m),
        );
        Ok(UnitFactorization { m, unit })
    }

    /// Composition inverse of a unit to order `n`, via
    /// `u = (u_0 t) o (t + w)` and `(t + w)^-1 = sum_k (-1)^k w^(k)`.
    pub fn invert_unit(&self, u: &CompSeries, n: i64) -> Result<CompSeries> {
        if u.min_k() != Some(0) {
            return Err(Error::NotAUnit(match u.min_k() {
                Some(m) => format!("leading index {m} instead of 0"),
                None => "zero series".into(),
            }));
        }
        let u0 = u.coeff(0).expect("min index present");
        let u0inv = self.ps_inv(u0).map_err(|e| match e {
            Error::DivisionByZero => Error::NotAUnit("zero constant coefficient".into()),
            other => other,
        })?;
        let order = u.order().map_or(n, |o| o.min(n));
        let w = self.cs_from_terms(
            u.terms().iter().filter(|(k, _)| **k >= 1).map(|(k, c)| (*k, self.ps_mul(&u0inv, c))),
            Some(order),
        );
        let mut sum = self.cs_truncate(&self.cs_identity(), order);
        let mut power = sum.clone();
        for i in 1..=order.max(0) {
            power = self.cs_truncate(&self.cs_compose(&w, &power)?, order);
            if power.is_zero() {
                break;
            }
            sum = if i % 2 == 1 { self.cs_sub(&sum, &power) } else { self.cs_add(&sum, &power) };
        }
        // sum o (u0^-1 t): coefficient s_l * (u0^-1)^(q^l)
        let mut terms = Vec::with_capacity(sum.terms().len());
        for (&l, s) in sum.terms() {
            terms.push((l, self.ps_mul(s, &self.ps_frobenius(&u0inv, l)?)));
        }
        Ok(self.cs_from_terms(terms, Some(order)))
    }

    /// Finds `(a', b')` with `a' o b = b' o a` and `b' != 0`, modulo order `n`.
    ///
    /// Leading indices are aligned by applying `t^(q^s)` on the left of the
    /// lower series, leading coefficients are equalized by a left scalar,
    /// then `a'` is solved coefficient by coefficient with `b'` a monomial.
    pub fn ore_left_multiple(&self, a: &CompSeries, b: &CompSeries, n: i64) -> Result<(CompSeries, CompSeries)> {
        let (ma, mb) = match (a.min_k(), b.min_k()) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::ZeroInput),
        };
        if ma < 0 || mb < 0 {
            return Err(Error::NotSolvable("Ore construction needs power series (index >= 0)".into()));
        }
        if mb < ma {
            let s = ma - mb;
            let b1 = self.cs_tau(b, s)?;
            let (a2, b_prime) = self.ore_aligned(a, &b1, n)?;
            let a_prime = self.cs_compose(&a2, &self.cs_monomial(s, self.ps_one()))?;
            Ok((a_prime, b_prime))
        } else if ma < mb {
            let s = mb - ma;
            let a1 = self.cs_tau(a, s)?;
            let (a_prime, b2) = self.ore_aligned(&a1, b, n)?;
            let b_prime = self.cs_compose(&b2, &self.cs_monomial(s, self.ps_one()))?;
            Ok((a_prime, b_prime))
        } else {
            self.ore_aligned(a, b, n)
        }
    }

    fn ore_aligned(&self, a: &CompSeries, b: &CompSeries, n: i64) -> Result<(CompSeries, CompSeries)> {
        let l = a.min_k().expect("nonzero");
        let alpha = a.coeff(l).expect("leading");
        let beta = b.coeff(l).expect("leading");
        let gamma = self.ps_div(alpha, beta)?;
        let b_scaled = self.cs_scale(&gamma, b);
        let a2 = self.ore_recursion(a, &b_scaled, n)?;
        // a' = a2 o (gamma t)
        let mut terms = Vec::with_capacity(a2.terms().len());
        for (&k, c) in a2.terms() {
            terms.push((k, self.ps_mul(c, &self.ps_frobenius(&gamma, k)?)));
        }
        let a_prime = self.cs_from_terms(terms, a2.order());
        Ok((a_prime, self.cs_monomial(l, self.ps_one())))
    }

    /// Both inputs lead at index `l` with the same coefficient `alpha`.
    /// With `b' = t^(q^l)` and `a'_l = 1`, matching index `k + l` of
    /// `a' o b = b' o a` gives
    /// `a'_k = alpha^(-q^k) (a_k^(q^l) - sum_{l <= i < k} a'_i b_(k+l-i)^(q^i))`.
    fn ore_recursion(&self, a: &CompSeries, b: &CompSeries, n: i64) -> Result<CompSeries> {
        let l = a.min_k().expect("nonzero");
        let alpha = a.coeff(l).expect("leading").clone();
        let alpha_inv = self.ps_inv(&alpha)?;
        let mut last = n - l;
        if let Some(o) = a.order() {
            last = last.min(o);
        }
        if let Some(o) = b.order() {
            last = last.min(o);
        }
        let zero = self.ps_zero();
        let mut coeffs: Vec<(i64, crate::series::PerfSeries)> = vec![(l, self.ps_one())];
        for k in (l + 1)..=last {
            let mut acc = self.ps_frobenius(a.coeff(k).unwrap_or(&zero), l)?;
            for (i, ai) in &coeffs {
                let bj = b.coeff(k + l - i).unwrap_or(&zero);
                if bj.is_exact_zero() || ai.is_exact_zero() {
                    continue;
                }
                acc = self.ps_sub(&acc, &self.ps_mul(ai, &self.ps_frobenius(bj, *i)?));
            }
            let ak = self.ps_mul(&self.ps_frobenius(&alpha_inv, k)?, &acc);
            coeffs.push((k, ak));
        }
        Ok(self.cs_from_terms(coeffs, Some(last)))
    }

    /// Normal form of `denom^-1 o numer`: returns `m` and `a' = unit^-1 o numer`
    /// where `denom = unit o t^(q^m)`, so the fraction equals `t^(q^-m) o a'`.
    pub fn fraction_normalize(&self, f: &OreFraction, n: i64) -> Result<(i64, CompSeries)> {
        let fac = match self.factor_unit(&f.denom) {
            Err(Error::ZeroInput) => return Err(Error::ZeroDenominator),
            other => other?,
        };
        let inv = self.invert_unit(&fac.unit, n)?;
        let reduced = self.cs_compose(&inv, &f.numer)?;
        Ok((fac.m, reduced))
    }

    /// `t^(q^-m) o a'` as a meromorphic series.
    pub fn fraction_to_series(&self, m: i64, reduced: &CompSeries) -> Result<CompSeries> {
        self.cs_tau(reduced, -m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{PerfExp, PerfSeries};

    fn xpow(ctx: &Ctx, n: i128) -> PerfSeries {
        ctx.ps_monomial(ctx.field().one(), PerfExp::int(n))
    }

    fn q2() -> Ctx {
        Ctx::for_q(2, 1, 1).unwrap()
    }

    #[test]
    fn factor_examples() {
        let ctx = q2();
        let t = ctx.cs_identity();
        assert_eq!(ctx.factor_unit(&t).unwrap(), UnitFactorization { m: 0, unit: t.clone() });
        let tq = ctx.cs_monomial(1, ctx.ps_one());
        assert_eq!(ctx.factor_unit(&tq).unwrap(), UnitFactorization { m: 1, unit: t.clone() });
        let c = ctx.cs_from_terms([(1, ctx.ps_x()), (2, ctx.ps_one())], None);
        let fac = ctx.factor_unit(&c).unwrap();
        assert_eq!(fac.m, 1);
        assert_eq!(fac.unit, ctx.cs_from_terms([(0, ctx.ps_x()), (1, ctx.ps_one())], None));
        // oracle: recompose
        let back = ctx.cs_compose(&fac.unit, &tq).unwrap();
        assert_eq!(back, c);
        assert_eq!(ctx.factor_unit(&ctx.cs_zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn invert_golden_q2() {
        let ctx = q2();
        let u = ctx.cs_from_terms([(0, ctx.ps_one()), (1, ctx.ps_x())], None);
        let inv = ctx.invert_unit(&u, 3).unwrap();
        let expect = ctx.cs_from_terms((0..=3).map(|n| (n, xpow(&ctx, (1 << n) - 1))), Some(3));
        assert_eq!(inv, expect);
        let t = ctx.cs_identity();
        assert!(ctx.cs_eq_mod(&ctx.cs_compose(&u, &inv).unwrap(), &t));
        assert!(ctx.cs_eq_mod(&ctx.cs_compose(&inv, &u).unwrap(), &t));
        let back = ctx.invert_unit(&inv, 3).unwrap();
        assert!(ctx.cs_eq_mod(&back, &u));
        assert_eq!(ctx.invert_unit(&t, 5).unwrap(), ctx.cs_truncate(&t, 5));
    }

    #[test]
    fn invert_rejects_non_units() {
        let ctx = q2();
        let c = ctx.cs_monomial(1, ctx.ps_one());
        assert!(matches!(ctx.invert_unit(&c, 4), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn ore_trivial_cases() {
        let ctx = q2();
        let a = ctx.cs_from_terms([(0, ctx.ps_x()), (2, ctx.ps_one())], None);
        let (ap, bp) = ctx.ore_left_multiple(&a, &a, 6).unwrap();
        assert_eq!(ap, ctx.cs_truncate(&ctx.cs_identity(), 6));
        assert_eq!(bp, ctx.cs_identity());
        let t = ctx.cs_identity();
        let (ap, bp) = ctx.ore_left_multiple(&a, &t, 6).unwrap();
        let lhs = ctx.cs_compose(&ap, &t).unwrap();
        let rhs = ctx.cs_compose(&bp, &a).unwrap();
        assert!(ctx.cs_eq_mod(&lhs, &rhs));
        assert!(!bp.is_zero());
    }

    #[test]
    fn ore_q2_example() {
        let ctx = q2();
        let a = ctx.cs_monomial(1, ctx.ps_one());
        let b = ctx.cs_from_terms([(1, ctx.ps_one()), (2, ctx.ps_x())], None);
        let (ap, bp) = ctx.ore_left_multiple(&a, &b, 6).unwrap();
        let lhs = ctx.cs_compose(&ap, &b).unwrap();
        let rhs = ctx.cs_compose(&bp, &a).unwrap();
        assert!(ctx.cs_eq_mod(&lhs, &rhs));
        assert!(lhs.order().unwrap() >= 6);
    }

    #[test]
    fn ore_unequal_leading_indices() {
        let ctx = Ctx::for_q(3, 1, 1).unwrap();
        let a = ctx.cs_from_terms([(2, ctx.ps_x()), (3, ctx.ps_one()), (5, xpow(&ctx, 2))], None);
        let b = ctx.cs_from_terms([(0, ctx.ps_int(2)), (1, ctx.ps_x())], None);
        for (a, b) in [(&a, &b), (&b, &a)] {
            let (ap, bp) = ctx.ore_left_multiple(a, b, 8).unwrap();
            let lhs = ctx.cs_compose(&ap, b).unwrap();
            let rhs = ctx.cs_compose(&bp, a).unwrap();
            assert!(ctx.cs_eq_mod(&lhs, &rhs), "{lhs:?} vs {rhs:?}");
            assert!(lhs.order().unwrap().min(rhs.order().unwrap_or(i64::MAX)) >= 8);
        }
    }

    #[test]
    fn fraction_examples() {
        let ctx = q2();
        let t = ctx.cs_identity();
        let d = ctx.cs_from_terms([(1, ctx.ps_x()), (3, ctx.ps_one())], None);
        let (m, red) = ctx.fraction_normalize(&OreFraction { denom: t.clone(), numer: d.clone() }, 6).unwrap();
        assert_eq!(m, 0);
        assert!(ctx.cs_eq_mod(&red, &d));

        let tq = ctx.cs_monomial(1, ctx.ps_one());
        let (m, red) = ctx.fraction_normalize(&OreFraction { denom: tq.clone(), numer: tq.clone() }, 6).unwrap();
        assert_eq!(m, 1);
        assert!(ctx.cs_eq_mod(&red, &tq));
        // t^(q^-1) o t^q is the identity
        let mero = ctx.fraction_to_series(m, &red).unwrap();
        assert!(ctx.cs_eq_mod(&mero, &t));

        let u = ctx.cs_from_terms([(0, ctx.ps_one()), (1, ctx.ps_x())], None);
        let (m, red) = ctx.fraction_normalize(&OreFraction { denom: u.clone(), numer: t.clone() }, 5).unwrap();
        assert_eq!(m, 0);
        assert!(ctx.cs_eq_mod(&red, &ctx.invert_unit(&u, 5).unwrap()));

        assert_eq!(
            ctx.fraction_normalize(&OreFraction { denom: ctx.cs_zero(), numer: t }, 5),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn fraction_clears_denominator() {
        let ctx = Ctx::for_q(3, 1, 1).unwrap();
        let c = ctx.cs_from_terms([(2, ctx.ps_x()), (3, ctx.ps_one())], None);
        let d = ctx.cs_from_terms([(0, ctx.ps_one()), (1, xpow(&ctx, 2))], None);
        let (m, red) = ctx.fraction_normalize(&OreFraction { denom: c.clone(), numer: d.clone() }, 8).unwrap();
        assert_eq!(m, 2);
        let mero = ctx.fraction_to_series(m, &red).unwrap();
        assert_eq!(mero.min_k(), Some(-2));
        let back = ctx.cs_compose(&c, &mero).unwrap();
        assert!(ctx.cs_eq_mod(&back, &d));
        assert!(back.order().unwrap() >= 6);
    }
}
