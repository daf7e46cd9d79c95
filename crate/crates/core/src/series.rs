//! Truncated Laurent series over `F_{q^s}` with exponents in `Z[1/p]`:
//! elements of the perfection `F_{q^s}((x))^perf`.
//!
//! Precision is absolute and x-adic: a series with `prec = Some(P)` is known
//! modulo `x^P`; `prec = None` marks an exact value (a finite sum). Every
//! operation propagates precision by the ultrametric rules and additionally
//! caps the relative precision of products at the context working precision,
//! which only ever lowers the claimed precision.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, Signed};

use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};

/// An exponent `num / p^den_exp`, stored as a reduced rational.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PerfExp(Ratio<i128>);

impl PerfExp {
    pub fn int(n: i128) -> Self {
        PerfExp(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    /// `num / p^den_exp`.
    pub fn from_parts(num: i128, den_exp: u32, p: u32) -> Result<Self> {
        let den = (p as i128).checked_pow(den_exp).ok_or(Error::ExponentOverflow)?;
        Ok(PerfExp(Ratio::new(num, den)))
    }

    /// Any rational whose reduced denominator is a power of `p`.
    pub fn from_ratio(num: i128, den: i128, p: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let r = Ratio::new(num, den);
        let e = PerfExp(r);
        if e.den_exp(p).is_none() {
            return Err(Error::InvalidConfig(format!(
                "exponent {num}/{den} has a denominator that is not a power of {p}"
            )));
        }
        Ok(e)
    }

    pub fn num(&self) -> i128 {
        *self.0.numer()
    }

    pub fn den(&self) -> i128 {
        *self.0.denom()
    }

    /// `k` with `den = p^k`, or `None` if the denominator is not a power of `p`.
    pub fn den_exp(&self, p: u32) -> Option<u32> {
        let mut d = self.den();
        let mut k = 0;
        while d > 1 {
            if d % p as i128 != 0 {
                return None;
            }
            d /= p as i128;
            k += 1;
        }
        Some(k)
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn ratio(&self) -> Ratio<i128> {
        self.0
    }

    /// Multiplies by `p^e` (negative `e` divides). Cancels against the
    /// denominator first, so only the reduced result has to fit.
    pub fn scale_p(&self, p: u32, e: i64) -> Result<Self> {
        let f = Ratio::from_integer((p as i128).checked_pow(e.unsigned_abs() as u32).ok_or(Error::ExponentOverflow)?);
        let r = if e >= 0 { self.0.checked_mul(&f) } else { self.0.checked_div(&f) };
        r.map(PerfExp).ok_or(Error::ExponentOverflow)
    }

    pub fn checked_mul_int(&self, k: i128) -> Result<Self> {
        let num = self.num().checked_mul(k).ok_or(Error::ExponentOverflow)?;
        Ok(PerfExp(Ratio::new(num, self.den())))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0.checked_add(&other.0).map(PerfExp).ok_or(Error::ExponentOverflow)
    }

    pub fn div_int(&self, k: i128) -> Self {
        PerfExp(self.0 / Ratio::from_integer(k))
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }
}

impl fmt::Display for PerfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

impl Add for &PerfExp {
    type Output = PerfExp;
    fn add(self, rhs: &PerfExp) -> PerfExp {
        PerfExp(self.0 + rhs.0)
    }
}

impl Sub for &PerfExp {
    type Output = PerfExp;
    fn sub(self, rhs: &PerfExp) -> PerfExp {
        PerfExp(self.0 - rhs.0)
    }
}

impl Neg for &PerfExp {
    type Output = PerfExp;
    fn neg(self) -> PerfExp {
        PerfExp(-self.0)
    }
}

/// Valuation of a truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(PerfExp),
    /// The known part vanishes; the true valuation is at least this.
    AtLeast(PerfExp),
    Infinite,
}

impl Valuation {
    /// Lower bound, `None` meaning `+infinity`.
    pub fn lower(&self) -> Option<&PerfExp> {
        match self {
            Valuation::Finite(e) | Valuation::AtLeast(e) => Some(e),
            Valuation::Infinite => None,
        }
    }
}

pub(crate) type Terms = Vec<(PerfExp, FieldElem)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PerfSeries {
    terms: Terms,
    prec: Option<PerfExp>,
}

impl PerfSeries {
    /// Nonzero terms in strictly increasing exponent order.
    pub fn terms(&self) -> &[(PerfExp, FieldElem)] {
        &self.terms
    }

    /// `None` for an exact value.
    pub fn prec(&self) -> Option<&PerfExp> {
        self.prec.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when no term is known to be nonzero (exact zero or `O(x^prec)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match (self.terms.first(), &self.prec) {
            (Some((e, _)), _) => Valuation::Finite(e.clone()),
            (None, Some(p)) => Valuation::AtLeast(p.clone()),
            (None, None) => Valuation::Infinite,
        }
    }

    /// Leading exponent, else the precision; `None` for an exact zero.
    pub fn val_lower(&self) -> Option<PerfExp> {
        self.valuation().lower().cloned()
    }

    pub fn leading(&self) -> Option<&(PerfExp, FieldElem)> {
        self.terms.first()
    }

    /// Coefficient of `x^e` (zero when absent).
    pub fn coeff(&self, e: &PerfExp) -> FieldElem {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(e))
            .map(|i| self.terms[i].1)
            .unwrap_or(FieldElem::ZERO)
    }

    /// Largest exponent denominator exponent over terms and precision.
    pub fn max_den(&self) -> i128 {
        self.terms
            .iter()
            .map(|(e, _)| e.den())
            .chain(self.prec.iter().map(|p| p.den()))
            .max()
            .unwrap_or(1)
    }
}

fn min_opt(a: Option<&PerfExp>, b: Option<&PerfExp>) -> Option<PerfExp> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

fn add_opt(a: Option<&PerfExp>, b: Option<&PerfExp>) -> Option<PerfExp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

/// Product of sorted term lists, dropping exponents `>= bound`.
/// Returns whether any term was dropped.
fn raw_mul(k: &FiniteField, a: &[(PerfExp, FieldElem)], b: &[(PerfExp, FieldElem)], bound: Option<&PerfExp>) -> (Terms, bool) {
    let mut acc: BTreeMap<PerfExp, FieldElem> = BTreeMap::new();
    let mut dropped = false;
    for (ea, ca) in a {
        if let (Some(bd), Some((eb0, _))) = (bound, b.first()) {
            if &(ea + eb0) >= bd {
                dropped = true;
                break;
            }
        }
        for (eb, cb) in b {
            let e = ea + eb;
            if let Some(bd) = bound {
                if &e >= bd {
                    dropped = true;
                    break;
                }
            }
            let prod = k.mul(*ca, *cb);
            let slot = acc.entry(e).or_insert(FieldElem::ZERO);
            *slot = k.add(*slot, prod);
        }
    }
    (acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(), dropped)
}

fn raw_add(k: &FiniteField, a: &[(PerfExp, FieldElem)], b: &[(PerfExp, FieldElem)], bound: Option<&PerfExp>) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (e, c) = match (a.get(i), b.get(j)) {
            (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                Ordering::Less => {
                    i += 1;
                    (ea.clone(), *ca)
                }
                Ordering::Greater => {
                    j += 1;
                    (eb.clone(), *cb)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (ea.clone(), k.add(*ca, *cb))
                }
            },
            (Some((ea, ca)), None) => {
                i += 1;
                (ea.clone(), *ca)
            }
            (None, Some((eb, cb))) => {
                j += 1;
                (eb.clone(), *cb)
            }
            (None, None) => unreachable!(),
        };
        if bound.is_some_and(|bd| &e >= bd) {
            break;
        }
        if !c.is_zero() {
            out.push((e, c));
        }
    }
    out
}

impl Ctx {
    pub fn ps_zero(&self) -> PerfSeries {
        PerfSeries { terms: Vec::new(), prec: None }
    }

    /// `O(x^prec)`.
    pub fn ps_big_o(&self, prec: PerfExp) -> Result<PerfSeries> {
        self.check_exp(&prec)?;
        Ok(PerfSeries { terms: Vec::new(), prec: Some(prec) })
    }

    pub fn ps_one(&self) -> PerfSeries {
        self.ps_const(self.field().one())
    }

    pub fn ps_const(&self, c: FieldElem) -> PerfSeries {
        self.ps_monomial(c, PerfExp::zero())
    }

    pub fn ps_int(&self, n: i64) -> PerfSeries {
        self.ps_const(self.field().from_int(n))
    }

    /// `c * x^e`; callers are responsible for `e` respecting the depth cap
    /// (use [`Ctx::ps_from_terms`] for validated construction).
    pub fn ps_monomial(&self, c: FieldElem, e: PerfExp) -> PerfSeries {
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        PerfSeries { terms, prec: None }
    }

    pub fn ps_x(&self) -> PerfSeries {
        self.ps_monomial(self.field().one(), PerfExp::int(1))
    }

    /// Validated construction: merges duplicate exponents, drops zero
    /// coefficients and terms at or beyond `prec`, checks exponent denominators.
    pub fn ps_from_terms(&self, terms: impl IntoIterator<Item = (PerfExp, FieldElem)>, prec: Option<PerfExp>) -> Result<PerfSeries> {
        if let Some(p) = &prec {
            self.check_exp(p)?;
        }
        let mut acc: BTreeMap<PerfExp, FieldElem> = BTreeMap::new();
        for (e, c) in terms {
            if e.den_exp(self.p()).is_none() {
                return Err(Error::InvalidConfig(format!("exponent {e} is not in Z[1/p]")));
            }
            self.check_exp(&e)?;
            if prec.as_ref().is_some_and(|p| &e >= p) {
                continue;
            }
            let slot = acc.entry(e).or_insert(FieldElem::ZERO);
            *slot = self.field().add(*slot, c);
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(PerfSeries { terms, prec })
    }

    /// Lowers the precision to `min(prec, current)`.
    pub fn ps_truncate(&self, a: &PerfSeries, prec: &PerfExp) -> PerfSeries {
        let new_prec = min_opt(a.prec(), Some(prec));
        let terms = a
            .terms
            .iter()
            .filter(|(e, _)| new_prec.as_ref().is_none_or(|p| e < p))
            .cloned()
            .collect();
        PerfSeries { terms, prec: new_prec }
    }

    pub fn ps_add(&self, a: &PerfSeries, b: &PerfSeries) -> PerfSeries {
        let prec = min_opt(a.prec(), b.prec());
        let terms = raw_add(self.field(), &a.terms, &b.terms, prec.as_ref());
        PerfSeries { terms, prec }
    }

    pub fn ps_neg(&self, a: &PerfSeries) -> PerfSeries {
        let k = self.field();
        PerfSeries {
            terms: a.terms.iter().map(|(e, c)| (e.clone(), k.neg(*c))).collect(),
            prec: a.prec.clone(),
        }
    }

    pub fn ps_sub(&self, a: &PerfSeries, b: &PerfSeries) -> PerfSeries {
        self.ps_add(a, &self.ps_neg(b))
    }

    /// Multiplication by a residue-field scalar.
    pub fn ps_scale(&self, a: &PerfSeries, c: FieldElem) -> PerfSeries {
        if c.is_zero() {
            return self.ps_zero();
        }
        let k = self.field();
        PerfSeries {
            terms: a.terms.iter().map(|(e, x)| (e.clone(), k.mul(*x, c))).collect(),
            prec: a.prec.clone(),
        }
    }

    /// Multiplication by `x^e`.
    pub fn ps_shift(&self, a: &PerfSeries, e: &PerfExp) -> PerfSeries {
        PerfSeries {
            terms: a.terms.iter().map(|(k, c)| (k + e, *c)).collect(),
            prec: a.prec.as_ref().map(|p| p + e),
        }
    }

    pub fn ps_mul(&self, a: &PerfSeries, b: &PerfSeries) -> PerfSeries {
        if a.is_exact_zero() || b.is_exact_zero() {
            return self.ps_zero();
        }
        let (va, vb) = (a.val_lower().unwrap(), b.val_lower().unwrap());
        let rule = min_opt(add_opt(a.prec(), Some(&vb)).as_ref(), add_opt(b.prec(), Some(&va)).as_ref());
        let cap = &(&va + &vb) + self.work_prec();
        let bound = min_opt(rule.as_ref(), Some(&cap)).unwrap();
        let (terms, dropped) = raw_mul(self.field(), &a.terms, &b.terms, Some(&bound));
        let prec = if dropped && rule.as_ref().is_none_or(|r| cap < *r) { Some(cap) } else { rule };
        PerfSeries { terms, prec }
    }

    /// Multiplicative inverse. Exact inputs are inverted to the working
    /// relative precision; inexact ones keep their relative precision.
    pub fn ps_inv(&self, a: &PerfSeries) -> Result<PerfSeries> {
        let Some((v0, c0)) = a.leading().cloned() else {
            return Err(if a.is_exact() {
                Error::DivisionByZero
            } else {
                Error::PrecisionExhausted("inverse of a series with unknown leading term".into())
            });
        };
        let k = self.field();
        if a.is_exact() && a.terms.len() == 1 {
            return Ok(self.ps_monomial(k.inv(c0)?, -&v0));
        }
        let rel = match a.prec() {
            None => self.work_prec().clone(),
            Some(p) => p - &v0,
        };
        let c0inv = k.inv(c0)?;
        let w: Terms = a.terms[1..]
            .iter()
            .map(|(e, c)| (e - &v0, k.mul(*c, c0inv)))
            .filter(|(e, _)| e < &rel)
            .collect();
        // (1 + w)^-1 = prod_i (1 + w^(p^i))^(p-1) modulo x^rel once w^(p^m) vanishes there.
        let one: Terms = vec![(PerfExp::zero(), k.one())];
        let mut result = one.clone();
        let mut wp = w;
        while wp.first().is_some_and(|(e, _)| e < &rel) {
            let factor = raw_add(k, &one, &wp, Some(&rel));
            for _ in 0..self.p() - 1 {
                result = raw_mul(k, &result, &factor, Some(&rel)).0;
            }
            let mut next = Vec::with_capacity(wp.len());
            for (e, c) in &wp {
                let e = e.scale_p(self.p(), 1)?;
                if e >= rel {
                    break;
                }
                next.push((e, k.frob_p(*c, 1)));
            }
            wp = next;
        }
        let neg_v0 = -&v0;
        let terms = result.into_iter().map(|(e, c)| (&e + &neg_v0, k.mul(c, c0inv))).collect();
        Ok(PerfSeries { terms, prec: Some(&rel + &neg_v0) })
    }

    pub fn ps_div(&self, a: &PerfSeries, b: &PerfSeries) -> Result<PerfSeries> {
        Ok(self.ps_mul(a, &self.ps_inv(b)?))
    }

    /// `a^n` by repeated squaring.
    pub fn ps_pow(&self, a: &PerfSeries, mut n: u64) -> PerfSeries {
        let mut result = self.ps_one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.ps_mul(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.ps_mul(&base, &base);
            }
        }
        result
    }

    /// `a^(p^e)` for any integer `e`: exponents scale by `p^e`, coefficients
    /// go through the field Frobenius.
    pub fn ps_pow_p(&self, a: &PerfSeries, e: i64) -> Result<PerfSeries> {
        if e == 0 {
            return Ok(a.clone());
        }
        let k = self.field();
        let p = self.p();
        let mut terms = Vec::with_capacity(a.terms.len());
        for (x, c) in &a.terms {
            let x = x.scale_p(p, e)?;
            self.check_exp(&x)?;
            terms.push((x, k.frob_p(*c, e)));
        }
        let prec = match &a.prec {
            Some(pr) => {
                let pr = pr.scale_p(p, e)?;
                self.check_exp(&pr)?;
                Some(pr)
            }
            None => None,
        };
        Ok(PerfSeries { terms, prec })
    }

    /// `a^(q^e)`; negative `e` takes iterated q-th roots.
    pub fn ps_frobenius(&self, a: &PerfSeries, e: i64) -> Result<PerfSeries> {
        self.ps_pow_p(a, e * self.v() as i64)
    }

    /// The unique q-th root in the perfection.
    pub fn ps_root_q(&self, a: &PerfSeries) -> Result<PerfSeries> {
        self.ps_frobenius(a, -1)
    }

    /// `a == b` modulo the smaller of the two precisions.
    pub fn ps_eq_mod(&self, a: &PerfSeries, b: &PerfSeries) -> bool {
        self.ps_sub(a, b).is_zero()
    }
}
