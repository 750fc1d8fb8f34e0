//! Command-line front end: argument definitions and subcommand dispatch.
//!
//! [`run`] never prints; it returns the rendered output together with the
//! process exit status so that the binary stays a thin wrapper and the
//! behaviour can be tested in-process.

mod parse;

pub use parse::{parse_scalar, parse_system, system_file};

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coeff::Q64;
use crate::driver::{explore, formal_reduce, Config, Reduction};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Orders, PerturbedSystem};
use crate::reduce::{
    eps_rank_reduce, exp_order_system, katz_ramify, resolve_turning_point, split, stretch, RankReduction,
    ReduceMode,
};
use crate::series::text::print_series;
use crate::series::BiSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "perturb", about = "Formal reduction of singularly perturbed linear differential systems")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Truncation order: powers of eps kept past the leading one.
    #[arg(long, global = true, default_value_t = 8)]
    pub order: i64,
    /// Largest eps ramification index allowed on a branch.
    #[arg(long = "max-ram", global = true, default_value_t = 64)]
    pub max_ram: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include the reduction trace or the transformation matrices.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Exponential parts of a system.
    Reduce {
        file: PathBuf,
        /// Stretch by every restraining index found and reduce again.
        #[arg(long)]
        iterate: bool,
    },
    /// Eps-polygon and invariants of a scalar equation.
    Polygon { file: PathBuf },
    /// Eps-rank reduction of a system.
    Moser { file: PathBuf },
    /// Block diagonalisation by distinct leading eigenvalues.
    Split { file: PathBuf },
    /// Turning-point resolution.
    Turning { file: PathBuf },
    /// Exponential order; with --ramify K also ramify eps = eps~^K and
    /// reduce.
    Omega {
        file: PathBuf,
        #[arg(long)]
        ramify: Option<i64>,
    },
    /// Stretch `x = eps^rho tau` and print the resulting system.
    Stretch {
        file: PathBuf,
        /// Nonnegative rational such as `1/3`.
        #[arg(long)]
        rho: String,
    },
}

/// Result of one command: rendered output and process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub exit: i32,
}

/// Error category printed in the error JSON.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::DimensionMismatch(_) => "dimension",
        Error::Precondition(_) => "precondition",
        Error::StalledH1(_) => "stalled",
        Error::RamificationLimit(_) => "ramification-limit",
        Error::InsufficientOrder(_) => "insufficient-order",
        Error::SpectraOverlap => "spectra-overlap",
        Error::NotInvertible => "not-invertible",
        Error::DivisionByZero => "division-by-zero",
        Error::ZeroDivisor { .. } => "zero-divisor",
        Error::NotSquarefree(_) => "not-squarefree",
    }
}

fn error_message(e: &Error) -> String {
    match e {
        Error::Precondition(m) => format!("precondition: {m}"),
        other => other.to_string(),
    }
}

/// Machine-readable form of an engine error.
pub fn error_json(e: &Error) -> Value {
    let mut v = json!({"kind": error_kind(e), "message": error_message(e), "exit_code": e.exit_code()});
    if let Error::Parse { line, col, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(col);
    }
    json!({ "error": v })
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let res = match &cli.cmd {
        Cmd::Polygon { file } => read(file).and_then(|t| polygon(&t)),
        Cmd::Stretch { file, rho } => read(file).and_then(|t| run_stretch(&t, rho)),
        Cmd::Reduce { file, iterate } => read(file).and_then(|t| reduce(cli, &t, *iterate)),
        Cmd::Moser { file } => read(file).and_then(|t| moser(cli, &t)),
        Cmd::Split { file } => read(file).and_then(|t| run_split(cli, &t)),
        Cmd::Turning { file } => read(file).and_then(|t| turning(cli, &t)),
        Cmd::Omega { file, ramify } => read(file).and_then(|t| omega(cli, &t, *ramify)),
    };
    match res {
        Ok(v) => Outcome { output: render(cli.format, &v), exit: 0 },
        // Errors are JSON in either format.
        Err(e) => Outcome { output: error_json(&e).to_string(), exit: e.exit_code() },
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::pre(format!("cannot read {}: {e}", path.display())))
}

fn orders(cli: &Cli) -> Orders {
    Orders::with_order(cli.order)
}

fn config(cli: &Cli) -> Config {
    Config { orders: orders(cli), max_ram: cli.max_ram, ..Config::default() }
}

/// Commands produce JSON values; text output flattens them.
fn render(format: Format, v: &Value) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).unwrap_or_default(),
        Format::Text => {
            let mut out = String::new();
            text_value(v, 0, &mut out);
            out
        }
    }
}

fn text_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(x, depth + 1, out);
                    }
                    Value::String(t) if t.contains('\n') => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in t.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_value(x, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn matrix_json(m: &Matrix<BiSeries>) -> Value {
    json!((0..m.rows()).map(|i| (0..m.cols()).map(|j| print_series(m.get(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn system_json(s: &PerturbedSystem) -> Value {
    json!({
        "n": s.n(),
        "d": s.d,
        "h": s.rep.h,
        "sigma": s.rep.sigma.to_string(),
        "p": s.rep.p.to_string(),
        "raw": matrix_json(&s.m),
        "file": system_file(s),
    })
}

fn reduction_json(cli: &Cli, r: &Reduction) -> Value {
    let mut v = json!({
        "dimension": r.exp.dimension(),
        "branches": r.exp.branches.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        "restraining_indices": r.restraining_indices().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "eps_terms": r.orders.eps_terms,
        "restarts": r.restarts,
    });
    if cli.trace {
        v["trace"] = match cli.format {
            Format::Json => r.trace.to_json(),
            Format::Text => json!(r.trace.text().lines().collect::<Vec<_>>()),
        };
    }
    v
}

fn reduce(cli: &Cli, text: &str, iterate: bool) -> Result<Value> {
    let sys = parse_system(text)?;
    let cfg = config(cli);
    if !iterate {
        return Ok(reduction_json(cli, &formal_reduce(&sys, &cfg)?));
    }
    let ex = explore(&sys, &cfg, 8)?;
    Ok(json!({
        "restraining_indices": ex.rhos.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "stages": ex.stages.iter().map(|s| json!({"rho": s.rho.to_string(), "reduction": reduction_json(cli, &s.reduction)})).collect::<Vec<_>>(),
    }))
}

fn polygon(text: &str) -> Result<Value> {
    let eq = parse_scalar(text)?;
    let edges = eq.eps_polygon();
    let mut v = json!({
        "order": eq.order(),
        "slopes": edges.iter().map(|e| e.slope.to_string()).collect::<Vec<_>>(),
        "edges": edges.iter().map(|e| json!({
            "slope": e.slope.to_string(),
            "indices": e.indices,
            "E": e.poly_text(),
        })).collect::<Vec<_>>(),
        "omega": eq.exp_order().to_string(),
    });
    match eq.invariants() {
        Ok(inv) => {
            v["kappa"] = json!(inv.kappa);
            v["nu"] = json!(inv.nu);
            v["mu"] = json!(inv.mu.to_string());
            v["gamma"] = json!(inv.gamma);
        }
        Err(Error::Precondition(m)) => v["invariants"] = json!(format!("unavailable: {m}")),
        Err(e) => return Err(e),
    }
    Ok(v)
}

fn rank_json(cli: &Cli, red: &RankReduction) -> Value {
    let mut v = json!({
        "history": red.history.iter().map(|(h, r)| json!({"h": h, "rank": r})).collect::<Vec<_>>(),
        "irreducible": red.irreducible,
        "stuck": red.stuck,
        "system": system_json(&red.sys),
    });
    if cli.trace {
        v["T"] = matrix_json(&red.t);
        v["T_inverse"] = matrix_json(&red.tinv);
    }
    v
}

fn moser(cli: &Cli, text: &str) -> Result<Value> {
    let sys = parse_system(text)?;
    let red = eps_rank_reduce(&sys, &orders(cli), ReduceMode::Differential)?;
    Ok(rank_json(cli, &red))
}

fn run_split(cli: &Cli, text: &str) -> Result<Value> {
    let sys = parse_system(text)?;
    let res = split(&sys, &orders(cli))?;
    let mut v = json!({
        "blocks": res.blocks.iter().zip(&res.eigenvalues).map(|((s, n), ev)| json!({
            "start": s, "size": n, "eigenvalue": ev.to_string(),
        })).collect::<Vec<_>>(),
        "levels": res.levels,
        "subsystems": res.subsystems.iter().map(system_json).collect::<Vec<_>>(),
    });
    if cli.trace {
        v["T"] = matrix_json(&res.t);
    }
    Ok(v)
}

fn turning(cli: &Cli, text: &str) -> Result<Value> {
    let sys = parse_system(text)?;
    let res = resolve_turning_point(&sys, &orders(cli))?;
    let pm = |m: &Matrix<crate::series::Puiseux>| {
        json!((0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_text("x")).collect::<Vec<_>>()).collect::<Vec<_>>())
    };
    Ok(json!({
        "q": res.q.to_string(),
        "x_ramification": res.x_ram,
        "T": pm(&res.t),
        "T_inverse": pm(&res.tinv),
        "system": system_json(&res.sys),
    }))
}

fn omega(cli: &Cli, text: &str, ramify: Option<i64>) -> Result<Value> {
    let sys = parse_system(text)?;
    if sys.rep.h <= 0 {
        return Err(Error::pre("h > 0"));
    }
    let ord = orders(cli);
    let res = exp_order_system(&sys, &ord)?;
    let mut v = json!({
        "omega": res.omega.to_string(),
        "edge": res.edge_text(),
        "support": res.support,
        "ramification": res.ramification,
    });
    if let Some(k) = ramify {
        let (k, red) = katz_ramify(&sys, &ord, Some(k))?;
        v["ramified"] = json!({"index": k, "reduction": rank_json(cli, &red)});
    }
    Ok(v)
}

/// Parse a nonnegative rational `a` or `a/b`.
pub fn parse_rho(s: &str) -> Result<Q64> {
    let bad = || Error::Parse { line: 1, col: 1, msg: format!("--rho expects a rational, got {s:?}") };
    let (a, b) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b <= 0 {
        return Err(bad());
    }
    Ok(Q64::new(a, b))
}

fn run_stretch(text: &str, rho: &str) -> Result<Value> {
    let rho = parse_rho(rho)?;
    let sys = parse_system(text)?;
    let out = stretch(&sys, rho)?;
    Ok(json!({"rho": rho.to_string(), "system": system_json(&out)}))
}

/// Exit status and output for raw arguments (the program name first).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let exit = if e.use_stderr() { 2 } else { 0 };
            Outcome { output: e.to_string(), exit }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(parse_rho("1/3").unwrap(), Q64::new(1, 3));
        assert_eq!(parse_rho("2").unwrap(), Q64::new(2, 1));
        assert!(parse_rho("x").is_err());
    }

    #[test]
    fn precondition_message() {
        let v = error_json(&Error::pre("h > 0"));
        assert_eq!(v["error"]["message"], "precondition: h > 0");
        assert_eq!(v["error"]["exit_code"], 3);
    }

    #[test]
    fn omega_rejects_nonpositive_rank() {
        let v = omega(&Cli::try_parse_from(["perturb", "omega", "f"]).unwrap(), "A=[[x, 1], [0, 2]]", None);
        assert!(matches!(v, Err(Error::Precondition(m)) if m == "h > 0"));
    }
}
