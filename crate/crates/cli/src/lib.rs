//! Command-line surface for the composition-series kernel: JSON documents,
//! the expression grammar, and the `carlitz` subcommands.
//!
//! [`run`] is the whole program minus process I/O, so tests drive it
//! directly. Output documents are deterministic: object keys are sorted and
//! the manifest records everything needed to reproduce the result.

pub mod commands;
pub mod expr;
pub mod json;

use std::fs;
use std::path::PathBuf;

use carlitz_core::{batch, Branch, Ctx, Error, FieldConfig, PerfExp};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::commands::{dispatch, Opts};
use crate::json::{exp_to_json, DocError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NONCONVERGENT: i32 = 4;
pub const EXIT_NEEDS_EXTENSION: i32 = 5;

/// An error together with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invalid(path: &str, msg: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, kind: "invalid_input", message: format!("{path}: {}", msg.into()) }
    }

    fn to_json(&self) -> Value {
        json!({ "kind": self.kind, "message": self.message, "exit_code": self.code })
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        let kind = match e {
            DocError::Parse { .. } => "parse_error",
            DocError::Invalid { .. } => "invalid_input",
        };
        Self { code: EXIT_INVALID, kind, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InvalidConfig(_) => (EXIT_INVALID, "invalid_config"),
            Error::NeedsFieldExtension { .. } => (EXIT_NEEDS_EXTENSION, "needs_field_extension"),
            Error::NonConvergent(_) => (EXIT_NONCONVERGENT, "non_convergent"),
            Error::PrecisionExhausted(_) => (EXIT_NONCONVERGENT, "precision_exhausted"),
            Error::PerfectionDepthExceeded { .. } => (EXIT_PRECONDITION, "perfection_depth_exceeded"),
            Error::OutsideConvergenceDomain { .. } => (EXIT_PRECONDITION, "outside_convergence_domain"),
            _ => (EXIT_PRECONDITION, "precondition"),
        };
        Self { code, kind, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Zero,
    Nonzero,
}

#[derive(Debug, Parser)]
#[command(name = "carlitz", version, about = "Composition series over function fields: arithmetic, Carlitz derivative, solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// q = p^v.
    #[arg(long, global = true, default_value_t = 1)]
    v: u32,
    /// Residue field F_{q^s}.
    #[arg(long, global = true, default_value_t = 1)]
    s: u32,
    /// Modulus coefficients over F_p, ascending and comma separated (default: first irreducible).
    #[arg(long = "mod", global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 8)]
    order: i64,
    /// x-adic precision as `num` or `num/den_exp` (meaning num / p^den_exp).
    #[arg(long, global = true, default_value = "8")]
    xprec: String,
    /// Perfection depth cap E (default 8v).
    #[arg(long = "perf-depth", global = true)]
    perf_depth: Option<u32>,
    /// Riccati branch for a_0.
    #[arg(long, global = true, value_enum)]
    branch: Option<BranchArg>,
    /// Back-substitute solver output; exit 4 on a nonzero residual.
    #[arg(long, global = true)]
    check: bool,
    /// Input document (default: stdin).
    #[arg(short = 'i', long = "input", global = true)]
    input: Option<PathBuf>,
    /// Write the output document here as well.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Input is an array of documents, processed independently.
    #[arg(long, global = true)]
    batch: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// a + b
    Add,
    /// a o b
    Compose,
    /// k-fold self-composition of a
    Power,
    /// composition inverse of a unit u
    Invert,
    /// c = unit o t^(q^m)
    Factor,
    /// a' o b = b' o a
    Ore,
    /// denom^-1 o numer in normal form
    FractionNormalize,
    /// tau^j u
    Tau,
    /// Delta u
    Delta,
    /// Carlitz derivative d u
    D,
    /// [k] = x^(q^k) - x
    Bracket,
    /// solve sum_k P_k o z^(k) = 0
    SolveImplicit,
    /// solve dz = sum a_jk tau^j(z^(k))
    SolveOde,
    /// solve dy = lambda (y o y) + P(tau) y + R
    SolveRiccati,
    /// evaluate a at t0 inside its certified domain
    Eval,
    /// growth certificate of a
    Certify,
    /// residual of a candidate solution
    ResidualCheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Add => "add",
            Command::Compose => "compose",
            Command::Power => "power",
            Command::Invert => "invert",
            Command::Factor => "factor",
            Command::Ore => "ore",
            Command::FractionNormalize => "fraction-normalize",
            Command::Tau => "tau",
            Command::Delta => "delta",
            Command::D => "d",
            Command::Bracket => "bracket",
            Command::SolveImplicit => "solve-implicit",
            Command::SolveOde => "solve-ode",
            Command::SolveRiccati => "solve-riccati",
            Command::Eval => "eval",
            Command::Certify => "certify",
            Command::ResidualCheck => "residual-check",
        }
    }
}

fn parse_xprec(text: &str, p: u32) -> Result<PerfExp, Failure> {
    let (num, den_exp) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i128>(), d.trim().parse::<u32>()),
        None => (text.trim().parse::<i128>(), Ok(0)),
    };
    match (num, den_exp) {
        (Ok(n), Ok(d)) => PerfExp::from_parts(n, d, p).map_err(|e| Failure::invalid("--xprec", e.to_string())),
        _ => Err(Failure::invalid("--xprec", format!("expected num or num/den_exp, got \"{text}\""))),
    }
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// Runs the program on `argv` (including the program name), reading the
/// input document from `-i` or `stdin`. Returns the exit code and the text
/// written to stdout.
pub fn run(argv: &[String], stdin: impl FnOnce() -> std::io::Result<String>) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let command = cli.command.name();
    let raw = match &cli.input {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
        None => stdin().map_err(|e| format!("stdin: {e}")),
    };
    let (code, doc) = match raw {
        Err(msg) => {
            let f = Failure { code: EXIT_INVALID, kind: "io_error", message: msg };
            (f.code, json!({ "manifest": { "command": command }, "error": f.to_json() }))
        }
        Ok(raw) => execute(&cli, command, &raw),
    };
    let text = render(&doc);
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &text) {
            return (EXIT_INVALID, format!("{}: {e}\n", path.display()));
        }
    }
    (code, text)
}

fn execute(cli: &Cli, command: &str, raw: &str) -> (i32, Value) {
    let digest = hex::encode(Sha256::digest(raw.as_bytes()));
    let setup = || -> Result<(Ctx, Opts), Failure> {
        let config = FieldConfig::new(cli.p, cli.v, cli.s, cli.modulus.clone())?;
        let depth = cli.perf_depth.unwrap_or(8 * cli.v);
        let ctx = Ctx::with_params(config, depth, PerfExp::int(carlitz_core::ctx::DEFAULT_WORK_PREC))?;
        let xprec = parse_xprec(&cli.xprec, cli.p)?;
        let branch = cli.branch.map(|b| match b {
            BranchArg::Zero => Branch::Zero,
            BranchArg::Nonzero => Branch::Nonzero,
        });
        Ok((ctx, Opts { order: cli.order, xprec, branch, check: cli.check }))
    };
    let mut manifest = json!({
        "command": command,
        "input_sha256": digest,
        "order": cli.order,
        "check": cli.check,
        "batch": cli.batch,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let (ctx, opts) = match setup() {
        Ok(x) => x,
        Err(f) => return (f.code, json!({ "manifest": manifest, "error": f.to_json() })),
    };
    manifest["config"] = serde_json::to_value(ctx.config()).expect("serializable");
    manifest["perf_depth"] = json!(ctx.perf_depth());
    manifest["xprec"] = exp_to_json(&ctx, &opts.xprec);
    manifest["branch"] = json!(opts.branch.map(crate::json::branch_name));

    let input: Value = match serde_json::from_str(raw) {
        Ok(v) => v,
        Err(e) => {
            let f = Failure { code: EXIT_INVALID, kind: "parse_error", message: format!("input JSON: {e}") };
            return (f.code, json!({ "manifest": manifest, "error": f.to_json() }));
        }
    };
    let one = |item: &Value| -> (i32, Value) {
        match dispatch(&ctx, command, item, &opts) {
            Err(f) => (f.code, json!({ "error": f.to_json() })),
            Ok(out) => {
                let mut doc = json!({ "result": out.result });
                let mut code = EXIT_OK;
                if let Some((passed, report)) = out.check {
                    if !report.is_null() {
                        doc["check"] = report;
                    }
                    if !passed {
                        code = EXIT_NONCONVERGENT;
                    }
                }
                (code, doc)
            }
        }
    };
    if cli.batch {
        let Some(items) = input.as_array() else {
            let f = Failure::invalid("$", "--batch expects an array of documents");
            return (f.code, json!({ "manifest": manifest, "error": f.to_json() }));
        };
        let outs = batch::map(items, one);
        let code = outs.iter().map(|(c, _)| *c).find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK);
        let docs: Vec<Value> = outs.into_iter().map(|(_, d)| d).collect();
        (code, json!({ "manifest": manifest, "results": docs }))
    } else {
        let (code, mut doc) = one(&input);
        doc["manifest"] = manifest;
        (code, doc)
    }
}
