//! Text form of perfection series and composition series.
//!
//! The grammar is documented in `GRAMMAR.md` at the crate root. [`emit_series`]
//! and [`emit_comp`] produce the canonical text, which parses back to the
//! same value.

use std::fmt;

use carlitz_core::{CompSeries, Ctx, FieldElem, PerfExp, PerfSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: expected {}, found {}", self.pos, self.expected, self.found)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = std::result::Result<T, ParseError>;

pub fn parse_series(ctx: &Ctx, text: &str) -> PResult<PerfSeries> {
    let mut p = Parser::new(ctx, text);
    let s = p.series()?;
    p.end()?;
    Ok(s)
}

pub fn parse_comp(ctx: &Ctx, text: &str) -> PResult<CompSeries> {
    let mut p = Parser::new(ctx, text);
    let s = p.comp()?;
    p.end()?;
    Ok(s)
}

struct Parser<'a> {
    ctx: &'a Ctx,
    src: &'a [u8],
    pos: usize,
}

enum Factor {
    Coef(PerfSeries),
    T(i64),
}

impl<'a> Parser<'a> {
    fn new(ctx: &'a Ctx, text: &'a str) -> Self {
        Self { ctx, src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn peek_at(&mut self, off: usize) -> Option<u8> {
        self.skip_ws();
        let mut i = self.pos;
        let mut left = off;
        while i < self.src.len() {
            if !self.src[i].is_ascii_whitespace() {
                if left == 0 {
                    return Some(self.src[i]);
                }
                left -= 1;
            }
            i += 1;
        }
        None
    }

    fn error<T>(&mut self, expected: &str) -> PResult<T> {
        self.skip_ws();
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("'{}'", c as char),
            None => "end of input".into(),
        };
        Err(ParseError { pos: self.pos, expected: expected.into(), found })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(&format!("'{}'", c as char))
        }
    }

    fn end(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            return self.error("end of input");
        }
        Ok(())
    }

    fn nat(&mut self) -> PResult<i128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<i128>().map_err(|_| ParseError { pos: start, expected: "a number that fits in 127 bits".into(), found: text.into() })
    }

    fn int(&mut self) -> PResult<i128> {
        let neg = self.eat(b'-');
        let n = self.nat()?;
        Ok(if neg { -n } else { n })
    }

    /// Sign between terms: `Some(true)` for `-`.
    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn at_big_o(&mut self) -> bool {
        self.peek() == Some(b'O') && self.peek_at(1) == Some(b'(')
    }

    fn exponent(&mut self) -> PResult<PerfExp> {
        let start = self.pos;
        if self.eat(b'{') {
            let num = self.int()?;
            let den = if self.eat(b'/') { self.nat()? } else { 1 };
            self.expect(b'}')?;
            self.make_exp(num, den, start)
        } else {
            let num = self.int()?;
            self.make_exp(num, 1, start)
        }
    }

    fn make_exp(&self, num: i128, den: i128, pos: usize) -> PResult<PerfExp> {
        let e = PerfExp::from_ratio(num, den, self.ctx.p()).map_err(|e| ParseError {
            pos,
            expected: format!("an exponent with denominator a power of {}", self.ctx.p()),
            found: e.to_string(),
        })?;
        self.ctx.ps_from_terms([(e.clone(), self.ctx.field().one())], None).map_err(|err| ParseError {
            pos,
            expected: "an exponent within the perfection depth".into(),
            found: err.to_string(),
        })?;
        Ok(e)
    }

    /// `x [^ exponent]`, after the `x` has been seen.
    fn xpow(&mut self) -> PResult<PerfExp> {
        self.expect(b'x')?;
        if self.eat(b'^') {
            self.exponent()
        } else {
            Ok(PerfExp::int(1))
        }
    }

    /// `t [^ ([q^int] | nat)]`; returns the index.
    fn tpow(&mut self) -> PResult<i64> {
        self.expect(b't')?;
        if !self.eat(b'^') {
            return Ok(0);
        }
        let start = self.pos;
        let k = if self.eat(b'[') {
            self.expect(b'q')?;
            self.expect(b'^')?;
            let k = self.int()?;
            self.expect(b']')?;
            k
        } else {
            let n = self.nat()?;
            let q = self.ctx.q() as i128;
            let mut k = 0;
            let mut m = n;
            while m > 1 && m % q == 0 {
                m /= q;
                k += 1;
            }
            if m != 1 {
                return Err(ParseError { pos: start, expected: format!("a power of q = {q}"), found: n.to_string() });
            }
            k
        };
        i64::try_from(k).map_err(|_| ParseError { pos: start, expected: "a small index".into(), found: k.to_string() })
    }

    fn factor(&mut self) -> PResult<Factor> {
        let ctx = self.ctx;
        let k = ctx.field();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let s = self.series()?;
                self.expect(b')')?;
                Ok(Factor::Coef(s))
            }
            Some(b'x') => {
                let e = self.xpow()?;
                Ok(Factor::Coef(ctx.ps_monomial(k.one(), e)))
            }
            Some(b'g') => {
                self.pos += 1;
                let n = if self.eat(b'^') { self.nat()? } else { 1 };
                let e = k.pow(k.generator(), u64::try_from(n).unwrap_or(u64::MAX));
                Ok(Factor::Coef(ctx.ps_const(e)))
            }
            Some(b't') => Ok(Factor::T(self.tpow()?)),
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                let r = (n % ctx.p() as i128) as i64;
                Ok(Factor::Coef(ctx.ps_const(k.from_int(r))))
            }
            _ => self.error("'(', 'x', 'g', 't' or a number"),
        }
    }

    /// `factor { * factor }`; at most one `t` factor, which must come last.
    fn product(&mut self) -> PResult<(PerfSeries, Option<i64>)> {
        let mut coef = self.ctx.ps_one();
        loop {
            let start = self.pos;
            match self.factor()? {
                Factor::Coef(c) => coef = self.ctx.ps_mul(&coef, &c),
                Factor::T(k) => {
                    if self.peek() == Some(b'*') {
                        self.pos = start;
                        return self.error("'t' only as the last factor");
                    }
                    return Ok((coef, Some(k)));
                }
            }
            if !self.eat(b'*') {
                return Ok((coef, None));
            }
        }
    }

    fn big_o_x(&mut self) -> PResult<PerfExp> {
        self.expect(b'O')?;
        self.expect(b'(')?;
        let e = self.xpow()?;
        self.expect(b')')?;
        Ok(e)
    }

    fn big_o_t(&mut self) -> PResult<i64> {
        self.expect(b'O')?;
        self.expect(b'(')?;
        let k = self.tpow()?;
        self.expect(b')')?;
        Ok(k)
    }

    fn series(&mut self) -> PResult<PerfSeries> {
        let ctx = self.ctx;
        let mut acc = ctx.ps_zero();
        let mut neg = self.peek() == Some(b'-') && {
            self.pos += 1;
            true
        };
        loop {
            if self.at_big_o() {
                let e = self.big_o_x()?;
                let o = ctx.ps_big_o(e).map_err(|err| ParseError { pos: self.pos, expected: "a valid precision".into(), found: err.to_string() })?;
                return Ok(ctx.ps_add(&acc, &o));
            }
            let start = self.pos;
            let (c, t) = self.product()?;
            if t.is_some() {
                self.pos = start;
                return self.error("a coefficient without 't'");
            }
            acc = if neg { ctx.ps_sub(&acc, &c) } else { ctx.ps_add(&acc, &c) };
            match self.sign() {
                Some(n) => neg = n,
                None => return Ok(acc),
            }
        }
    }

    fn comp(&mut self) -> PResult<CompSeries> {
        let ctx = self.ctx;
        let mut terms: Vec<(i64, PerfSeries)> = Vec::new();
        let mut order = None;
        let mut neg = self.peek() == Some(b'-') && {
            self.pos += 1;
            true
        };
        loop {
            if self.at_big_o() {
                order = Some(self.big_o_t()? - 1);
                break;
            }
            let start = self.pos;
            let (c, t) = self.product()?;
            match t {
                Some(k) => terms.push((k, if neg { ctx.ps_neg(&c) } else { c })),
                None if c.is_exact_zero() && terms.is_empty() && self.peek().is_none() => break,
                None => {
                    self.pos = start;
                    return self.error("a term ending in 't'");
                }
            }
            match self.sign() {
                Some(n) => neg = n,
                None => break,
            }
        }
        Ok(ctx.cs_from_terms(terms, order))
    }
}

fn emit_exp(e: &PerfExp) -> String {
    if e.is_integer() && !e.is_negative() {
        format!("{}", e.num())
    } else {
        format!("{{{e}}}")
    }
}

fn emit_xpow(e: &PerfExp) -> String {
    if *e == PerfExp::int(1) {
        "x".into()
    } else {
        format!("x^{}", emit_exp(e))
    }
}

/// Field constant as a polynomial in `g`; `(single_term, text)`.
fn emit_const(ctx: &Ctx, c: FieldElem) -> (bool, String) {
    let coords = ctx.field().coords(c);
    let mut parts = Vec::new();
    for (i, &d) in coords.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        let gp = match i {
            0 => String::new(),
            1 => "g".into(),
            _ => format!("g^{i}"),
        };
        parts.push(match (d, i) {
            (_, 0) => d.to_string(),
            (1, _) => gp,
            _ => format!("{d}*{gp}"),
        });
    }
    if parts.is_empty() {
        return (true, "0".into());
    }
    (parts.len() == 1, parts.join("+"))
}

fn emit_term(ctx: &Ctx, e: &PerfExp, c: FieldElem) -> String {
    let (single, cs) = emit_const(ctx, c);
    if e.num() == 0 {
        return if single { cs } else { format!("({cs})") };
    }
    let xp = emit_xpow(e);
    if c == ctx.field().one() {
        xp
    } else if single {
        format!("{cs}*{xp}")
    } else {
        format!("({cs})*{xp}")
    }
}

pub fn emit_series(ctx: &Ctx, s: &PerfSeries) -> String {
    let mut parts: Vec<String> = s.terms().iter().map(|(e, c)| emit_term(ctx, e, *c)).collect();
    if let Some(p) = s.prec() {
        parts.push(format!("O({})", emit_xpow(p)));
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

fn emit_tpow(k: i64) -> String {
    if k == 0 {
        "t".into()
    } else {
        format!("t^[q^{k}]")
    }
}

pub fn emit_comp(ctx: &Ctx, a: &CompSeries) -> String {
    let mut parts = Vec::new();
    for (&k, c) in a.terms() {
        let tp = emit_tpow(k);
        let one_term = c.is_exact() && c.terms().len() == 1;
        parts.push(if *c == ctx.ps_one() {
            tp
        } else if one_term {
            format!("{}*{tp}", emit_series(ctx, c))
        } else {
            format!("({})*{tp}", emit_series(ctx, c))
        });
    }
    if let Some(n) = a.order() {
        parts.push(format!("O({})", emit_tpow(n + 1)));
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}
