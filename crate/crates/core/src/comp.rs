//! The composition ring of F_q-linear series `sum_k c_k t^(q^k)`.
//!
//! Indices may be negative (meromorphic elements of the twisted Laurent
//! skew field over the perfection). A series with `order = Some(N)` is known
//! modulo terms of index `> N`; `order = None` marks a finite exact sum.

use std::collections::BTreeMap;

use crate::certificate::GrowthCertificate;
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::series::{PerfExp, PerfSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompSeries {
    terms: BTreeMap<i64, PerfSeries>,
    order: Option<i64>,
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl CompSeries {
    pub fn terms(&self) -> &BTreeMap<i64, PerfSeries> {
        &self.terms
    }

    /// `None` for an exact (finite) series.
    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn coeff(&self, k: i64) -> Option<&PerfSeries> {
        self.terms.get(&k)
    }

    /// Index of the first coefficient known to be nonzero.
    pub fn min_k(&self) -> Option<i64> {
        self.terms.iter().find(|(_, c)| !c.is_zero()).map(|(k, _)| *k)
    }

    pub fn max_k(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest index that may carry a nonzero coefficient (including
    /// coefficients only known as `O(x^P)`); `None` for exact zero.
    pub(crate) fn lo(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.order.map(|n| n + 1))
    }

    /// True when no coefficient is known to be nonzero.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.order.is_none()
    }
}

impl Ctx {
    pub fn cs_zero(&self) -> CompSeries {
        CompSeries { terms: BTreeMap::new(), order: None }
    }

    /// Zero known modulo terms of index `> order`.
    pub fn cs_zero_mod(&self, order: i64) -> CompSeries {
        CompSeries { terms: BTreeMap::new(), order: Some(order) }
    }

    /// The unit element `t`.
    pub fn cs_identity(&self) -> CompSeries {
        self.cs_monomial(0, self.ps_one())
    }

    /// `c * t^(q^k)`.
    pub fn cs_monomial(&self, k: i64, c: PerfSeries) -> CompSeries {
        self.cs_from_terms([(k, c)], None)
    }

    /// Builds a series, summing repeated indices and dropping exact-zero
    /// coefficients and indices beyond `order`. Coefficients known only as
    /// `O(x^P)` are kept so their precision keeps propagating.
    pub fn cs_from_terms(&self, terms: impl IntoIterator<Item = (i64, PerfSeries)>, order: Option<i64>) -> CompSeries {
        let mut map: BTreeMap<i64, PerfSeries> = BTreeMap::new();
        for (k, c) in terms {
            if order.is_some_and(|n| k > n) {
                continue;
            }
            match map.get_mut(&k) {
                Some(slot) => *slot = self.ps_add(slot, &c),
                None => {
                    map.insert(k, c);
                }
            }
        }
        map.retain(|_, c| !c.is_exact_zero());
        CompSeries { terms: map, order }
    }

    pub fn cs_truncate(&self, a: &CompSeries, order: i64) -> CompSeries {
        let order = min_opt(a.order, Some(order));
        self.cs_from_terms(a.terms.iter().map(|(k, c)| (*k, c.clone())), order)
    }

    pub fn cs_add(&self, a: &CompSeries, b: &CompSeries) -> CompSeries {
        let order = min_opt(a.order, b.order);
        let terms = a.terms.iter().chain(b.terms.iter()).map(|(k, c)| (*k, c.clone()));
        self.cs_from_terms(terms, order)
    }

    pub fn cs_neg(&self, a: &CompSeries) -> CompSeries {
        CompSeries {
            terms: a.terms.iter().map(|(k, c)| (*k, self.ps_neg(c))).collect(),
            order: a.order,
        }
    }

    pub fn cs_sub(&self, a: &CompSeries, b: &CompSeries) -> CompSeries {
        self.cs_add(a, &self.cs_neg(b))
    }

    /// Left scalar multiplication `(gamma t) o a`, i.e. coefficientwise `gamma * a_k`.
    pub fn cs_scale(&self, gamma: &PerfSeries, a: &CompSeries) -> CompSeries {
        if gamma.is_exact_zero() {
            return self.cs_zero();
        }
        let terms = a.terms.iter().map(|(k, c)| (*k, self.ps_mul(gamma, c)));
        self.cs_from_terms(terms, a.order)
    }

    /// `a o b`: `(a o b)_l = sum_{n + j = l} a_n * b_j^(q^n)`.
    pub fn cs_compose(&self, a: &CompSeries, b: &CompSeries) -> Result<CompSeries> {
        if a.is_exact_zero() || b.is_exact_zero() {
            return Ok(self.cs_zero());
        }
        let order = min_opt(add_opt(a.order, b.lo()), add_opt(b.order, a.lo()));
        let b_lo = b.lo().expect("nonzero");
        let mut acc: BTreeMap<i64, PerfSeries> = BTreeMap::new();
        for (&n, an) in &a.terms {
            if order.is_some_and(|ord| n + b_lo > ord) {
                break;
            }
            for (&j, bj) in &b.terms {
                let l = n + j;
                if order.is_some_and(|ord| l > ord) {
                    break;
                }
                let term = self.ps_mul(an, &self.ps_frobenius(bj, n)?);
                match acc.get_mut(&l) {
                    Some(slot) => *slot = self.ps_add(slot, &term),
                    None => {
                        acc.insert(l, term);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_exact_zero());
        Ok(CompSeries { terms: acc, order })
    }

    /// `z o z o ... o z` (`k` factors); `k = 0` gives the identity.
    pub fn cs_self_power(&self, z: &CompSeries, k: u32) -> Result<CompSeries> {
        if k == 0 {
            return Ok(self.cs_identity());
        }
        let mut acc = z.clone();
        for _ in 1..k {
            acc = self.cs_compose(z, &acc)?;
        }
        Ok(acc)
    }

    /// `tau^j`: the function raised to the `q^j`-th power. Index `k` moves to
    /// `k + j` and its coefficient to `c_k^(q^j)`.
    pub fn cs_tau(&self, u: &CompSeries, j: i64) -> Result<CompSeries> {
        let mut terms = Vec::with_capacity(u.terms.len());
        for (&k, c) in &u.terms {
            terms.push((k + j, self.ps_frobenius(c, j)?));
        }
        Ok(self.cs_from_terms(terms, u.order.map(|n| n + j)))
    }

    /// Equality modulo both truncation orders and coefficient precisions.
    pub fn cs_eq_mod(&self, a: &CompSeries, b: &CompSeries) -> bool {
        self.cs_sub(a, b).is_zero()
    }

    /// Evaluates `a` at `t0` inside the certified domain `v(t0) > kappa`.
    ///
    /// The sum runs over the known coefficients; when `a` is truncated at
    /// order `N`, the result precision is lowered to the tail bound
    /// `q^(N+1) (v(t0) - kappa)`.
    pub fn cs_eval(&self, a: &CompSeries, t0: &PerfSeries, cert: &GrowthCertificate) -> Result<PerfSeries> {
        let Some(vt) = t0.val_lower() else {
            return Ok(self.ps_zero());
        };
        if vt <= *cert.kappa() {
            return Err(Error::OutsideConvergenceDomain {
                valuation: vt.to_string(),
                kappa: cert.kappa().to_string(),
            });
        }
        if !cert.covers(self, a)? {
            return Err(Error::NotSolvable("growth certificate does not cover the series".into()));
        }
        let mut sum = self.ps_zero();
        for (&k, c) in &a.terms {
            let power = self.ps_frobenius(t0, k)?;
            sum = self.ps_add(&sum, &self.ps_mul(c, &power));
        }
        if let Some(n) = a.order {
            if let Some(tail) = cert.tail_bound(self, n + 1, &vt) {
                sum = self.ps_truncate(&sum, &tail);
            }
        }
        Ok(sum)
    }
}

/// Coefficient of `t^(q^l)` in the `k`-fold self-composition of
/// `sum_{i >= 1} c_i t^(q^i)`:
/// `sum_{n_1 + ... + n_k = l, n_i >= 1} c_{n_1} c_{n_2}^(q^n_1) ... c_{n_k}^(q^(n_1 + ... + n_{k-1}))`.
///
/// Computed by convolving one composition factor at a time, O(k l^2)
/// coefficient products. Coefficients of `c` at indices `< 1` are ignored.
pub fn multinomial_coeff(ctx: &Ctx, l: i64, k: u32, c: &CompSeries) -> Result<PerfSeries> {
    if k == 0 || l < k as i64 {
        return Ok(ctx.ps_zero());
    }
    let zero = ctx.ps_zero();
    let coeff = |n: i64| c.coeff(n).unwrap_or(&zero).clone();
    // level[m] = coefficient of t^(q^m) in z^(j), for m in 0..=l
    let mut level: Vec<PerfSeries> = (0..=l).map(|m| if m >= 1 { coeff(m) } else { ctx.ps_zero() }).collect();
    for j in 1..k as i64 {
        let mut next = vec![ctx.ps_zero(); (l + 1) as usize];
        for m in (j + 1)..=l {
            let mut acc = ctx.ps_zero();
            for n in 1..=(m - j) {
                let cn = coeff(n);
                let w = &level[(m - n) as usize];
                if cn.is_exact_zero() || w.is_exact_zero() {
                    continue;
                }
                acc = ctx.ps_add(&acc, &ctx.ps_mul(&cn, &ctx.ps_frobenius(w, n)?));
            }
            next[m as usize] = acc;
        }
        level = next;
    }
    Ok(level[l as usize].clone())
}

/// Exponent `q^k * e` helper used by evaluation tails and certificates.
pub(crate) fn scale_q(ctx: &Ctx, e: &PerfExp, k: i64) -> Result<PerfExp> {
    e.scale_p(ctx.p(), k * ctx.v() as i64)
}
