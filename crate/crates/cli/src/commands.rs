//! One function per subcommand: input document in, result document out.

use carlitz_core::{growth_certificate, Branch, CompSeries, Ctx, Equation, PerfExp, PerfSeries};
use serde_json::{json, Value};

use crate::json::*;
use crate::Failure;

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Opts {
    pub order: i64,
    pub xprec: PerfExp,
    pub branch: Option<Branch>,
    pub check: bool,
}

/// Outcome of one command: the result document and, with `--check`, the
/// back-substitution report.
pub struct Output {
    pub result: Value,
    pub check: Option<(bool, Value)>,
}

impl Output {
    fn plain(result: Value) -> Self {
        Self { result, check: None }
    }
}

type CResult = Result<Output, Failure>;

fn comp_in(ctx: &Ctx, input: &Value, key: &str) -> Result<CompSeries, Failure> {
    Ok(comp_from_json(ctx, member(input, key, "$")?, &format!("$.{key}"))?)
}

fn series_in(ctx: &Ctx, input: &Value, key: &str) -> Result<PerfSeries, Failure> {
    Ok(series_from_json(ctx, member(input, key, "$")?, &format!("$.{key}"))?)
}

fn int_in(input: &Value, key: &str) -> Result<i64, Failure> {
    Ok(as_i64(member(input, key, "$")?, &format!("$.{key}"))?)
}

/// True when every coefficient of `r` is known to vanish below `x^xprec`.
fn vanishes_below(r: &CompSeries, xprec: &PerfExp) -> bool {
    r.terms().values().all(|c| c.terms().iter().all(|(e, _)| e >= xprec) && c.prec().is_none_or(|p| p >= xprec))
}

fn check_report(ctx: &Ctx, residual: &CompSeries, passed: bool) -> Option<(bool, Value)> {
    Some((passed, json!({ "passed": passed, "residual": comp_to_json(ctx, residual) })))
}

pub fn dispatch(ctx: &Ctx, command: &str, input: &Value, opts: &Opts) -> CResult {
    let n = opts.order;
    match command {
        "add" => {
            let (a, b) = (comp_in(ctx, input, "a")?, comp_in(ctx, input, "b")?);
            Ok(Output::plain(comp_to_json(ctx, &ctx.cs_truncate(&ctx.cs_add(&a, &b), n))))
        }
        "compose" => {
            let (a, b) = (comp_in(ctx, input, "a")?, comp_in(ctx, input, "b")?);
            Ok(Output::plain(comp_to_json(ctx, &ctx.cs_truncate(&ctx.cs_compose(&a, &b)?, n))))
        }
        "power" => {
            let a = comp_in(ctx, input, "a")?;
            let k = u32::try_from(int_in(input, "k")?).map_err(|_| Failure::invalid("$.k", "expected k >= 0"))?;
            let a = ctx.cs_truncate(&a, n);
            Ok(Output::plain(comp_to_json(ctx, &ctx.cs_truncate(&ctx.cs_self_power(&a, k)?, n))))
        }
        "invert" => {
            let u = comp_in(ctx, input, "u")?;
            Ok(Output::plain(comp_to_json(ctx, &ctx.invert_unit(&u, n)?)))
        }
        "factor" => {
            let f = ctx.factor_unit(&comp_in(ctx, input, "c")?)?;
            Ok(Output::plain(json!({ "m": f.m, "unit": comp_to_json(ctx, &ctx.cs_truncate(&f.unit, n)) })))
        }
        "ore" => {
            let (a, b) = (comp_in(ctx, input, "a")?, comp_in(ctx, input, "b")?);
            let (a2, b2) = ctx.ore_left_multiple(&a, &b, n)?;
            let cert = growth_certificate(ctx, &a2)?;
            let mut out = Output::plain(json!({
                "a_prime": comp_to_json(ctx, &a2),
                "b_prime": comp_to_json(ctx, &b2),
                "certificate": certificate_to_json(ctx, &cert),
            }));
            if opts.check {
                let r = ctx.cs_sub(&ctx.cs_compose(&a2, &b)?, &ctx.cs_compose(&b2, &a)?);
                out.check = check_report(ctx, &r, r.is_zero());
            }
            Ok(out)
        }
        "fraction-normalize" => {
            let f = fraction_from_json(ctx, input, "$")?;
            let (m, reduced) = ctx.fraction_normalize(&f, n)?;
            let series = ctx.fraction_to_series(m, &reduced)?;
            Ok(Output::plain(json!({
                "m": m,
                "reduced": comp_to_json(ctx, &reduced),
                "series": comp_to_json(ctx, &series),
            })))
        }
        "tau" => {
            let u = comp_in(ctx, input, "u")?;
            let j = int_in(input, "j")?;
            Ok(Output::plain(comp_to_json(ctx, &ctx.tau_power(&u, j)?)))
        }
        "delta" => Ok(Output::plain(comp_to_json(ctx, &ctx.carlitz_delta(&comp_in(ctx, input, "u")?)?))),
        "d" => Ok(Output::plain(comp_to_json(ctx, &ctx.carlitz_d(&comp_in(ctx, input, "u")?)?))),
        "bracket" => Ok(Output::plain(series_to_json(ctx, &ctx.bracket(int_in(input, "k")?)?))),
        "solve-implicit" => {
            let prob = implicit_from_json(ctx, input, "$")?;
            let (z, cert) = ctx.solve_implicit(&prob, n)?;
            let mut out = Output::plain(json!({ "z": comp_to_json(ctx, &z), "certificate": certificate_to_json(ctx, &cert) }));
            if opts.check {
                let r = ctx.residual_implicit(&prob, &z, n)?;
                out.check = check_report(ctx, &r, r.is_zero());
            }
            Ok(out)
        }
        "solve-ode" => {
            let prob = ode_from_json(ctx, input, "$")?;
            let normalize = input.get("time_change").and_then(Value::as_bool).unwrap_or(false);
            let (z, e) = if normalize {
                let (norm, tc) = ctx.normalize_time_change(&prob)?;
                let (zn, _) = ctx.solve_ode(&norm, n)?;
                (ctx.undo_time_change(&zn, &tc)?, Some(tc.e))
            } else {
                (ctx.solve_ode(&prob, n)?.0, None)
            };
            let cert = growth_certificate(ctx, &z)?;
            let mut result = json!({ "z": comp_to_json(ctx, &z), "certificate": certificate_to_json(ctx, &cert) });
            if let Some(e) = e {
                result["gamma_exponent"] = json!(e);
            }
            let mut out = Output::plain(result);
            if opts.check {
                let r = ctx.residual_ode(&prob, &z, n)?;
                out.check = check_report(ctx, &r, r.is_zero());
            }
            Ok(out)
        }
        "solve-riccati" => {
            let mut prob = riccati_from_json(ctx, input, "$")?;
            if let Some(b) = opts.branch {
                prob.branch = b;
            }
            let sol = ctx.solve_riccati(&prob, n, &opts.xprec)?;
            let mut out = Output::plain(riccati_solution_to_json(ctx, &sol));
            if opts.check {
                let r = ctx.residual_riccati(&prob, &sol.series(ctx), n - 1)?;
                out.check = check_report(ctx, &r, vanishes_below(&r, &opts.xprec));
            }
            Ok(out)
        }
        "eval" => {
            let a = comp_in(ctx, input, "a")?;
            let t0 = series_in(ctx, input, "t0")?;
            let cert = growth_certificate(ctx, &a)?;
            let value = ctx.cs_eval(&a, &t0, &cert)?;
            Ok(Output::plain(json!({ "value": series_to_json(ctx, &value), "certificate": certificate_to_json(ctx, &cert) })))
        }
        "certify" => {
            let cert = growth_certificate(ctx, &comp_in(ctx, input, "a")?)?;
            Ok(Output::plain(certificate_to_json(ctx, &cert)))
        }
        "residual-check" => {
            let kind = member(input, "equation", "$")?.as_str().unwrap_or_default();
            let problem = member(input, "problem", "$")?;
            let eq = match kind {
                "implicit" => Equation::Implicit(implicit_from_json(ctx, problem, "$.problem")?),
                "ode" => Equation::Ode(ode_from_json(ctx, problem, "$.problem")?),
                "riccati" => Equation::Riccati(riccati_from_json(ctx, problem, "$.problem")?),
                other => {
                    return Err(Failure::invalid("$.equation", format!("unknown equation \"{other}\"")));
                }
            };
            let sol = comp_in(ctx, input, "solution")?;
            let (r, passed) = match &eq {
                Equation::Riccati(_) => {
                    let r = ctx.residual(&eq, &sol, n - 1)?;
                    let ok = vanishes_below(&r, &opts.xprec);
                    (r, ok)
                }
                _ => {
                    let r = ctx.residual(&eq, &sol, n)?;
                    let ok = r.is_zero();
                    (r, ok)
                }
            };
            Ok(Output { result: json!({ "residual": comp_to_json(ctx, &r), "passed": passed }), check: Some((passed, Value::Null)) })
        }
        other => Err(Failure::invalid("command", format!("unknown command \"{other}\""))),
    }
}
