//! Residue fields `F_{q^s}` with `q = p^v`, built as `F_p[g] / (modulus)`.
//!
//! Elements are packed into a `u32` (base-`p` digits are the coordinates of
//! the element in the power basis of the generator `g`), and multiplication
//! goes through discrete log/exp tables, so every field operation is O(n) or
//! better. This keeps the field small by construction: at most 2^20 elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_FIELD_SIZE: u64 = 1 << 20;

/// User-facing description of the residue field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u32,
    pub v: u32,
    pub s: u32,
    /// Monic modulus over `F_p` of degree `v*s`, coefficients ascending.
    pub modulus: Vec<u32>,
}

impl FieldConfig {
    /// Validates `p`, `v`, `s` and the modulus. When `modulus` is `None` the
    /// lexicographically first monic irreducible polynomial of degree `v*s`
    /// (comparing ascending coefficient lists) is used.
    pub fn new(p: u32, v: u32, s: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("p = {p} is not prime")));
        }
        if v == 0 || s == 0 {
            return Err(Error::InvalidConfig("v and s must be positive".into()));
        }
        let n = v.checked_mul(s).ok_or_else(|| Error::InvalidConfig("degree overflow".into()))?;
        let size = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::InvalidConfig(format!(
                "field of size {p}^{n} exceeds the supported maximum of {MAX_FIELD_SIZE}"
            )));
        }
        let prime = FiniteField::prime(p);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 {
                    return Err(Error::InvalidConfig(format!(
                        "modulus must be monic of degree {n}"
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidConfig("modulus coefficients must lie in [0, p)".into()));
                }
                let f: Vec<FieldElem> = m.iter().map(|&c| FieldElem(c)).collect();
                if !upoly::is_irreducible(&prime, &f) {
                    return Err(Error::InvalidConfig("modulus is reducible over F_p".into()));
                }
                m
            }
            None => first_irreducible(&prime, n),
        };
        Ok(Self { p, v, s, modulus })
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.v)
    }

    pub fn degree(&self) -> u32 {
        self.v * self.s
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn first_irreducible(prime: &FiniteField, n: u32) -> Vec<u32> {
    let p = prime.p;
    let count = (p as u64).pow(n);
    // Lexicographic on the ascending list: c_0 is the most significant digit.
    for idx in 0..count {
        let mut coeffs = vec![0u32; n as usize + 1];
        let mut r = idx;
        for i in (0..n as usize).rev() {
            coeffs[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        coeffs[n as usize] = 1;
        let f: Vec<FieldElem> = coeffs.iter().map(|&c| FieldElem(c)).collect();
        if upoly::is_irreducible(prime, &f) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Packed field element; digits in base `p` are its coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Position in the canonical enumeration of the field.
    pub fn index(self) -> u32 {
        self.0
    }
}

/// `F_{p^n}` with log/exp tables.
#[derive(Debug, Clone)]
pub struct FiniteField {
    config: FieldConfig,
    p: u32,
    n: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(config: FieldConfig) -> Self {
        let p = config.p;
        let n = config.degree();
        let size = p.pow(n);
        let mut field = Self { config, p, n, size, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        field
    }

    /// The prime field `F_p` (modulus `g`).
    pub fn prime(p: u32) -> Self {
        Self::new(FieldConfig { p, v: 1, s: 1, modulus: vec![0, 1] })
    }

    fn build_tables(&mut self) {
        let order = self.size - 1;
        if order == 0 {
            return;
        }
        for cand in 1..self.size {
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                exp.push(cur);
                cur = self.slow_mul(cur, cand);
            }
            if ok && cur == 1 {
                let mut log = vec![0u32; self.size as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let n = self.n as usize;
        let p = self.p as u64;
        let ca = self.coords(FieldElem(a));
        let cb = self.coords(FieldElem(b));
        let mut prod = vec![0u64; 2 * n];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = (prod[i + j] + ca[i] as u64 * cb[j] as u64) % p;
            }
        }
        let m = &self.config.modulus;
        for d in (n..2 * n).rev() {
            let lead = prod[d];
            if lead != 0 {
                for i in 0..n {
                    let sub = lead * m[i] as u64 % p;
                    prod[d - n + i] = (prod[d - n + i] + p - sub) % p;
                }
                prod[d] = 0;
            }
        }
        let coords: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.from_coords(&coords).0
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The class of the generator `g` modulo the modulus.
    pub fn generator(&self) -> FieldElem {
        if self.n >= 2 {
            FieldElem(self.p)
        } else {
            let m0 = self.config.modulus[0];
            FieldElem((self.p - m0) % self.p)
        }
    }

    pub fn from_int(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.p as i64) as u32)
    }

    /// Builds an element from coordinates, reducing each mod `p`.
    /// Coordinates beyond the degree must be absent.
    pub fn from_coords(&self, coords: &[u32]) -> FieldElem {
        debug_assert!(coords.len() <= self.n as usize);
        let mut idx = 0u32;
        for &c in coords.iter().rev() {
            idx = idx * self.p + c % self.p;
        }
        FieldElem(idx)
    }

    /// Element from a coordinate vector of exact length `n`, validating ranges.
    pub fn try_from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        if coords.len() != self.n as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidConfig(format!(
                "field element needs {} coordinates in [0, {})",
                self.n, self.p
            )));
        }
        Ok(self.from_coords(coords))
    }

    pub fn coords(&self, a: FieldElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut r = a.0;
        for _ in 0..self.n {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let order = (self.size - 1) as u64;
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % order;
        FieldElem(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElem(self.exp[((order - l) % order) as usize]))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[((l as u128 * e as u128) % order as u128) as usize])
    }

    /// `a^(p^e)` for any integer `e`; negative `e` is the inverse Frobenius.
    pub fn frob_p(&self, a: FieldElem, e: i64) -> FieldElem {
        if a.0 == 0 || self.size == 2 {
            return a;
        }
        let e = e.rem_euclid(self.n as i64) as u32;
        let order = (self.size - 1) as u64;
        let mut l = self.log[a.0 as usize] as u64;
        for _ in 0..e {
            l = l * self.p as u64 % order;
        }
        FieldElem(self.exp[l as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.size).map(FieldElem)
    }
}

/// Dense univariate polynomials over a [`FiniteField`], ascending coefficients.
/// Only what the kernel needs: irreducibility and smallest root degree.
pub mod upoly {
    use super::{FieldElem, FiniteField};

    pub type Poly = Vec<FieldElem>;

    pub fn trim(mut f: Poly) -> Poly {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        f
    }

    fn rem(k: &FiniteField, a: &[FieldElem], m: &[FieldElem]) -> Poly {
        let mut a = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = k.inv(m[dm]).expect("nonzero modulus");
        while a.len() > dm {
            let top = a.len() - 1;
            let c = k.mul(a[top], lead_inv);
            if !c.is_zero() {
                for i in 0..=dm {
                    let t = k.mul(c, m[i]);
                    a[top - dm + i] = k.sub(a[top - dm + i], t);
                }
            }
            a.pop();
            a = trim(a);
        }
        a
    }

    fn mulmod(k: &FiniteField, a: &[FieldElem], b: &[FieldElem], m: &[FieldElem]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![FieldElem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = k.add(prod[i + j], k.mul(x, y));
            }
        }
        rem(k, &prod, m)
    }

    fn powmod(k: &FiniteField, base: &[FieldElem], mut e: u64, m: &[FieldElem]) -> Poly {
        let mut result = rem(k, &[k.one()], m);
        let mut b = rem(k, base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(k, &result, &b, m);
            }
            b = mulmod(k, &b, &b, m);
            e >>= 1;
        }
        result
    }

    pub fn gcd(k: &FiniteField, a: &[FieldElem], b: &[FieldElem]) -> Poly {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(k, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn sub_x(k: &FiniteField, h: &[FieldElem]) -> Poly {
        let mut h = h.to_vec();
        if h.len() < 2 {
            h.resize(2, FieldElem::ZERO);
        }
        h[1] = k.sub(h[1], k.one());
        trim(h)
    }

    /// Smallest `d >= 1` such that `f` has a root in the degree-`d` extension
    /// of `k`, i.e. `gcd(X^(|k|^d) - X, f) != 1`. `f` must be non-constant.
    pub fn min_root_degree(k: &FiniteField, f: &[FieldElem]) -> u32 {
        let f = trim(f.to_vec());
        let deg = f.len() - 1;
        let x = vec![FieldElem::ZERO, k.one()];
        let mut h = rem(k, &x, &f);
        for d in 1..=deg as u32 {
            h = powmod(k, &h, k.size() as u64, &f);
            let g = gcd(k, &sub_x(k, &h), &f);
            if g.len() > 1 {
                return d;
            }
        }
        deg as u32
    }

    pub fn is_irreducible(k: &FiniteField, f: &[FieldElem]) -> bool {
        let f = trim(f.to_vec());
        if f.len() < 2 {
            return false;
        }
        let deg = f.len() - 1;
        if deg == 1 {
            return true;
        }
        let x = vec![FieldElem::ZERO, k.one()];
        let mut h = rem(k, &x, &f);
        for _ in 1..=deg / 2 {
            h = powmod(k, &h, k.size() as u64, &f);
            if gcd(k, &sub_x(k, &h), &f).len() > 1 {
                return false;
            }
        }
        true
    }
}
