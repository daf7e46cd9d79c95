//! JSON documents for kernel values and problems.
//!
//! Every number is an exact integer. Fields holding a series also accept a
//! string in the expression grammar; the emitters always write the
//! structured form, and structured canonical documents round-trip exactly.

use std::collections::BTreeMap;
use std::fmt;

use carlitz_core::{
    Branch, CompSeries, Ctx, FieldElem, GrowthCertificate, ImplicitProblem, OdeProblem, OreFraction, PerfExp, PerfSeries,
    RiccatiProblem, RiccatiSolution,
};
use serde_json::{json, Map, Value};

use crate::expr::{self, ParseError};

/// Malformed or invalid input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocError {
    Parse { path: String, err: ParseError },
    Invalid { path: String, msg: String },
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Parse { path, err } => write!(f, "{path}: {err}"),
            DocError::Invalid { path, msg } => write!(f, "{path}: {msg}"),
        }
    }
}

impl std::error::Error for DocError {}

pub type DResult<T> = std::result::Result<T, DocError>;

fn invalid<T>(path: &str, msg: impl Into<String>) -> DResult<T> {
    Err(DocError::Invalid { path: path.into(), msg: msg.into() })
}

fn obj<'a>(v: &'a Value, path: &str) -> DResult<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| invalid(path, "expected an object"), Ok)
}

/// Required member of an object.
pub fn member<'a>(v: &'a Value, key: &str, path: &str) -> DResult<&'a Value> {
    match obj(v, path)?.get(key) {
        Some(x) => Ok(x),
        None => invalid(path, format!("missing field \"{key}\"")),
    }
}

pub fn as_i64(v: &Value, path: &str) -> DResult<i64> {
    v.as_i64().map_or_else(|| invalid(path, "expected an integer"), Ok)
}

fn as_array<'a>(v: &'a Value, path: &str) -> DResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| invalid(path, "expected an array"), Ok)
}

/// Numerators outside the `i64` range are written as decimal strings.
pub fn exp_to_json(ctx: &Ctx, e: &PerfExp) -> Value {
    let den_exp = e.den_exp(ctx.p()).expect("exponents have p-power denominators");
    let num = i64::try_from(e.num()).map_or_else(|_| json!(e.num().to_string()), |n| json!(n));
    json!({ "num": num, "den_exp": den_exp })
}

fn wide_int(v: &Value, path: &str) -> DResult<i128> {
    if let Some(n) = v.as_i64() {
        return Ok(n as i128);
    }
    v.as_str().and_then(|s| s.parse::<i128>().ok()).map_or_else(|| invalid(path, "expected an integer"), Ok)
}

pub fn exp_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<PerfExp> {
    if let Some(n) = v.as_i64() {
        return Ok(PerfExp::int(n as i128));
    }
    let num = wide_int(member(v, "num", path)?, &format!("{path}.num"))?;
    let den_exp = member(v, "den_exp", path)?
        .as_u64()
        .and_then(|d| u32::try_from(d).ok())
        .map_or_else(|| invalid(&format!("{path}.den_exp"), "expected a non-negative integer"), Ok)?;
    PerfExp::from_parts(num, den_exp, ctx.p()).or_else(|e| invalid(path, e.to_string()))
}

pub fn elem_to_json(ctx: &Ctx, c: FieldElem) -> Value {
    json!(ctx.field().coords(c))
}

pub fn elem_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<FieldElem> {
    if let Some(n) = v.as_i64() {
        return Ok(ctx.field().from_int(n));
    }
    let coords = as_array(v, path)?
        .iter()
        .map(|d| d.as_u64().and_then(|d| u32::try_from(d).ok()))
        .collect::<Option<Vec<u32>>>()
        .map_or_else(|| invalid(path, "expected an array of coordinates"), Ok)?;
    ctx.field().try_from_coords(&coords).or_else(|e| invalid(path, e.to_string()))
}

pub fn series_to_json(ctx: &Ctx, s: &PerfSeries) -> Value {
    let terms: Vec<Value> =
        s.terms().iter().map(|(e, c)| json!({ "e": exp_to_json(ctx, e), "c": elem_to_json(ctx, *c) })).collect();
    json!({
        "prec": s.prec().map(|p| exp_to_json(ctx, p)),
        "terms": terms,
    })
}

pub fn series_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<PerfSeries> {
    if let Some(text) = v.as_str() {
        return expr::parse_series(ctx, text).map_err(|err| DocError::Parse { path: path.into(), err });
    }
    let prec = match member(v, "prec", path)? {
        Value::Null => None,
        p => Some(exp_from_json(ctx, p, &format!("{path}.prec"))?),
    };
    let mut terms = Vec::new();
    for (i, t) in as_array(member(v, "terms", path)?, path)?.iter().enumerate() {
        let tp = format!("{path}.terms[{i}]");
        let e = exp_from_json(ctx, member(t, "e", &tp)?, &format!("{tp}.e"))?;
        let c = elem_from_json(ctx, member(t, "c", &tp)?, &format!("{tp}.c"))?;
        terms.push((e, c));
    }
    ctx.ps_from_terms(terms, prec).or_else(|e| invalid(path, e.to_string()))
}

pub fn comp_to_json(ctx: &Ctx, a: &CompSeries) -> Value {
    let terms: Vec<Value> =
        a.terms().iter().map(|(k, c)| json!({ "k": k, "coef": series_to_json(ctx, c) })).collect();
    json!({ "N": a.order(), "terms": terms })
}

pub fn comp_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<CompSeries> {
    if let Some(text) = v.as_str() {
        return expr::parse_comp(ctx, text).map_err(|err| DocError::Parse { path: path.into(), err });
    }
    let order = match member(v, "N", path)? {
        Value::Null => None,
        n => Some(as_i64(n, &format!("{path}.N"))?),
    };
    let mut terms = Vec::new();
    for (i, t) in as_array(member(v, "terms", path)?, path)?.iter().enumerate() {
        let tp = format!("{path}.terms[{i}]");
        let k = as_i64(member(t, "k", &tp)?, &format!("{tp}.k"))?;
        let c = series_from_json(ctx, member(t, "coef", &tp)?, &format!("{tp}.coef"))?;
        terms.push((k, c));
    }
    Ok(ctx.cs_from_terms(terms, order))
}

pub fn fraction_to_json(ctx: &Ctx, f: &OreFraction) -> Value {
    json!({ "denom": comp_to_json(ctx, &f.denom), "numer": comp_to_json(ctx, &f.numer) })
}

pub fn fraction_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<OreFraction> {
    Ok(OreFraction {
        denom: comp_from_json(ctx, member(v, "denom", path)?, &format!("{path}.denom"))?,
        numer: comp_from_json(ctx, member(v, "numer", path)?, &format!("{path}.numer"))?,
    })
}

pub fn implicit_to_json(ctx: &Ctx, prob: &ImplicitProblem) -> Value {
    let p: Vec<Value> = prob.p.iter().map(|c| comp_to_json(ctx, c)).collect();
    json!({ "P": p, "nu": prob.nu })
}

pub fn implicit_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<ImplicitProblem> {
    let p = as_array(member(v, "P", path)?, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| comp_from_json(ctx, c, &format!("{path}.P[{i}]")))
        .collect::<DResult<Vec<_>>>()?;
    let nu = match obj(v, path)?.get("nu") {
        Some(n) => as_i64(n, &format!("{path}.nu"))?,
        None => 0,
    };
    Ok(ImplicitProblem::new(p, nu))
}

pub fn ode_to_json(ctx: &Ctx, prob: &OdeProblem) -> Value {
    let a: Vec<Value> =
        prob.a.iter().map(|((j, k), c)| json!({ "j": j, "k": k, "coef": series_to_json(ctx, c) })).collect();
    json!({ "a": a })
}

pub fn ode_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<OdeProblem> {
    let mut entries = Vec::new();
    for (i, t) in as_array(member(v, "a", path)?, path)?.iter().enumerate() {
        let tp = format!("{path}.a[{i}]");
        let j = as_i64(member(t, "j", &tp)?, &format!("{tp}.j"))?;
        let k = member(t, "k", &tp)?
            .as_u64()
            .and_then(|k| u32::try_from(k).ok())
            .map_or_else(|| invalid(&format!("{tp}.k"), "expected a non-negative integer"), Ok)?;
        let c = series_from_json(ctx, member(t, "coef", &tp)?, &format!("{tp}.coef"))?;
        entries.push(((j, k), c));
    }
    let mut merged: BTreeMap<(i64, u32), PerfSeries> = BTreeMap::new();
    for (key, c) in entries {
        let sum = match merged.get(&key) {
            Some(prev) => ctx.ps_add(prev, &c),
            None => c,
        };
        merged.insert(key, sum);
    }
    OdeProblem::new(merged).or_else(|e| invalid(path, e.to_string()))
}

fn indexed_to_json(ctx: &Ctx, m: &BTreeMap<i64, PerfSeries>) -> Value {
    Value::Array(m.iter().map(|(k, c)| json!({ "k": k, "coef": series_to_json(ctx, c) })).collect())
}

fn indexed_from_json(ctx: &Ctx, v: Option<&Value>, path: &str) -> DResult<BTreeMap<i64, PerfSeries>> {
    let mut out = BTreeMap::new();
    let Some(v) = v else { return Ok(out) };
    for (i, t) in as_array(v, path)?.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let k = as_i64(member(t, "k", &tp)?, &format!("{tp}.k"))?;
        let c = series_from_json(ctx, member(t, "coef", &tp)?, &format!("{tp}.coef"))?;
        if out.insert(k, c).is_some() {
            return invalid(&tp, format!("duplicate index {k}"));
        }
    }
    Ok(out)
}

pub fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Zero => "zero",
        Branch::Nonzero => "nonzero",
    }
}

pub fn branch_from_str(s: &str, path: &str) -> DResult<Branch> {
    match s {
        "zero" => Ok(Branch::Zero),
        "nonzero" => Ok(Branch::Nonzero),
        other => invalid(path, format!("branch must be \"zero\" or \"nonzero\", got \"{other}\"")),
    }
}

pub fn riccati_to_json(ctx: &Ctx, prob: &RiccatiProblem) -> Value {
    json!({
        "lambda": series_to_json(ctx, &prob.lambda),
        "p": indexed_to_json(ctx, &prob.p),
        "r": indexed_to_json(ctx, &prob.r),
        "branch": branch_name(prob.branch),
    })
}

pub fn riccati_from_json(ctx: &Ctx, v: &Value, path: &str) -> DResult<RiccatiProblem> {
    let o = obj(v, path)?;
    let lambda = series_from_json(ctx, member(v, "lambda", path)?, &format!("{path}.lambda"))?;
    let p = indexed_from_json(ctx, o.get("p"), &format!("{path}.p"))?;
    let r = indexed_from_json(ctx, o.get("r"), &format!("{path}.r"))?;
    let branch = match o.get("branch") {
        None => Branch::Zero,
        Some(b) => branch_from_str(b.as_str().unwrap_or_default(), &format!("{path}.branch"))?,
    };
    Ok(RiccatiProblem { lambda, p, r, branch })
}

pub fn certificate_to_json(ctx: &Ctx, c: &GrowthCertificate) -> Value {
    json!({ "kappa": exp_to_json(ctx, c.kappa()), "range": c.range() })
}

pub fn riccati_solution_to_json(ctx: &Ctx, sol: &RiccatiSolution) -> Value {
    let steps: Vec<Value> = sol
        .steps
        .iter()
        .enumerate()
        .map(|(l, s)| {
            json!({
                "l": l,
                "valuations": s.valuations.iter().map(|v| exp_to_json(ctx, v)).collect::<Vec<_>>(),
                "residual": series_to_json(ctx, &s.residual),
            })
        })
        .collect();
    json!({
        "c": series_to_json(ctx, &sol.c),
        "a": sol.a.iter().map(|a| series_to_json(ctx, a)).collect::<Vec<_>>(),
        "y": comp_to_json(ctx, &sol.series(ctx)),
        "steps": steps,
    })
}
