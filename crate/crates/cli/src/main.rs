//! Command-line front end: evaluate series objects, verify identities over
//! bindings or grids, expand stuffle products, and print q -> 1 diagnostics.
//!
//! Exit codes: 0 on success (all verifications passed), 1 when any
//! verification failed, 2 on usage or domain errors.

mod config;
mod output;
mod parse;

use clap::{Args, Parser, Subcommand};
use qeuler_core::classical::{alt_zeta_value, euler_sum, zeta_value, Constants};
use qeuler_core::error::Error;
use qeuler_core::identities::{
    self, find_entry, Binding, EvalCtx, IdentityEntry, Mode, ParamKind, ParamValue, VerifyReport,
};
use qeuler_core::numerics::{format_decimal, parse_decimal, q_bracket, Precision, QParam};
use qeuler_core::qseries::{h_function, q_harmonic, q_polylog, s_sum, zeta_partial, HSpec};
use qeuler_core::stuffle::{li_star, stuffle_fold, FormalSum, Word};
use qeuler_core::QReal;
use rayon::prelude::*;
use std::io::Write;
use std::process::ExitCode;

use config::{Format, RunConfig};

/// Writes one line to stdout, ignoring closed-pipe errors.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

#[derive(Parser)]
#[command(name = "qeuler", about = "q-series and Euler-sum evaluation and identity verification")]
struct Cli {
    /// Working precision in mantissa bits.
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    /// Target absolute tolerance for series evaluation.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Pass multiplier on top of certified error bounds.
    #[arg(long, global = true)]
    slack: Option<f64>,
    /// Output format: json, csv, or pretty.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    /// Parallelism for sweeps (0 = rayon default).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one series object and print its value with a bound.
    Eval(EvalArgs),
    /// Verify one identity (or all) at a binding or over a grid.
    Verify(VerifyArgs),
    /// Sweep an identity over a grid and print a summary.
    Sweep(SweepArgs),
    /// Expand or evaluate a stuffle product of letters.
    Stuffle(StuffleArgs),
    /// Print the q -> 1 diagnostic table.
    Limits,
    /// List registered identities.
    List,
}

#[derive(Args)]
struct EvalArgs {
    /// One of: q-bracket, zeta-partial, q-polylog, h-function, s-sum,
    /// q-harmonic, li-star, euler-sum, zeta, alt-zeta.
    kind: String,
    /// Deformation parameter (required by q-objects).
    #[arg(long)]
    q: Option<String>,
    /// Real argument b for q-bracket.
    #[arg(long)]
    b: Option<String>,
    /// Truncation index m.
    #[arg(long)]
    m: Option<u64>,
    /// Exponent k.
    #[arg(long)]
    k: Option<u32>,
    /// Weight x (decimal, q, or q^s).
    #[arg(long)]
    x: Option<String>,
    /// Shift a for h-function.
    #[arg(long)]
    a: Option<String>,
    /// Nested-sum spec S[k1,..;x1,..|k;x] or Euler-sum spec S(e1,..;k).
    #[arg(long)]
    spec: Option<String>,
    /// Letter list for li-star, e.g. "[2;0.5][1;0.5]".
    #[arg(long)]
    letters: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity id (see `qeuler list`).
    id: Option<String>,
    /// Verify every registered identity over its default grid.
    #[arg(long)]
    all: bool,
    /// Parameter values, repeatable: --set k=2 --set q=0.3,0.7 (grids
    /// multiply out). Without --set the default grid runs.
    #[arg(long = "set")]
    sets: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Identity id.
    id: String,
    /// Parameter values, repeatable; without --set the default grid runs.
    #[arg(long = "set")]
    sets: Vec<String>,
}

#[derive(Args)]
struct StuffleArgs {
    /// Letter list, e.g. "[2;a] [3;b]" or "[1;0.5]".
    #[arg(long)]
    letters: String,
    /// Print the canonical symbolic expansion.
    #[arg(long)]
    symbolic: bool,
    /// Evaluate the product numerically (requires --q).
    #[arg(long)]
    numeric: bool,
    /// Deformation parameter for numeric mode.
    #[arg(long)]
    q: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match RunConfig::load_file(path) {
            Ok(c) => c,
            Err(e) => return usage_error(e),
        },
        None => RunConfig::default(),
    };
    if let Some(v) = cli.precision_bits {
        cfg.precision_bits = v;
    }
    if let Some(v) = cli.tol {
        cfg.tol = v;
    }
    if let Some(v) = cli.slack {
        cfg.slack = v;
    }
    if let Some(v) = cli.format {
        cfg.format = v;
    }
    if let Some(v) = cli.jobs {
        cfg.jobs = v;
    }
    if cfg.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    }
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(&args, &cfg),
        Command::Verify(args) => return cmd_verify(&args, &cfg),
        Command::Sweep(args) => {
            return cmd_verify(
                &VerifyArgs { id: Some(args.id), all: false, sets: args.sets },
                &cfg,
            )
        }
        Command::Stuffle(args) => cmd_stuffle(&args, &cfg),
        Command::Limits => cmd_limits(&cfg),
        Command::List => cmd_list(&cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => usage_error(e),
    }
}

fn usage_error(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn need<'a, T>(opt: &'a Option<T>, name: &str) -> Result<&'a T, Error> {
    opt.as_ref().ok_or_else(|| Error::Parse(format!("missing required flag --{name}")))
}

fn parse_q(args_q: &Option<String>, prec: &Precision) -> Result<QParam, Error> {
    let s = need(args_q, "q")?;
    QParam::new(parse_decimal(s, prec.bits())?)
}

fn cmd_eval(args: &EvalArgs, cfg: &RunConfig) -> Result<(), Error> {
    let prec = cfg.precision()?;
    let value: QReal = match args.kind.as_str() {
        "q-bracket" => {
            let q = parse_q(&args.q, &prec)?;
            let b = parse_decimal(need(&args.b, "b")?, prec.bits())?;
            q_bracket(&b, &q, &prec)?
        }
        "zeta-partial" => {
            let q = parse_q(&args.q, &prec)?;
            let m = *need(&args.m, "m")?;
            let k = *need(&args.k, "k")?;
            let x = parse::parse_weight(need(&args.x, "x")?, &q, &prec)?;
            zeta_partial(m, k, &x, &q, &prec)?
        }
        "q-polylog" => {
            let q = parse_q(&args.q, &prec)?;
            let k = *need(&args.k, "k")?;
            let x = parse::parse_weight(need(&args.x, "x")?, &q, &prec)?;
            q_polylog(k, &x, &q, &prec)?
        }
        "h-function" => {
            let q = parse_q(&args.q, &prec)?;
            let k = *need(&args.k, "k")?;
            let x = parse::parse_weight(need(&args.x, "x")?, &q, &prec)?;
            let a = parse_decimal(need(&args.a, "a")?, prec.bits())?;
            h_function(&HSpec::new(k, x, a, q)?, &prec)?
        }
        "s-sum" => {
            let q = parse_q(&args.q, &prec)?;
            let spec = parse::parse_s_sum(need(&args.spec, "spec")?, &q, &prec)?;
            s_sum(&spec, &prec)?
        }
        "q-harmonic" => {
            let q = parse_q(&args.q, &prec)?;
            let m = *need(&args.m, "m")?;
            let k = *need(&args.k, "k")?;
            q_harmonic(m, k, &q, &prec)?
        }
        "li-star" => {
            let q = parse_q(&args.q, &prec)?;
            let letters = parse::parse_letters(need(&args.letters, "letters")?, &q, &prec)?;
            let word = Word::from_letters(letters);
            qeuler_core::stuffle::li_star_word(&word, &q, &prec)?
        }
        "euler-sum" => {
            let spec = parse::parse_euler_sum(need(&args.spec, "spec")?)?;
            let consts = Constants::new(&prec)?;
            euler_sum(&spec, &consts, &prec)?
        }
        "zeta" => zeta_value(*need(&args.k, "k")?, &prec)?,
        "alt-zeta" => alt_zeta_value(*need(&args.k, "k")?, &prec)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown object `{other}` (expected q-bracket, zeta-partial, q-polylog, \
                 h-function, s-sum, q-harmonic, li-star, euler-sum, zeta, alt-zeta)"
            )))
        }
    };
    emit(&output::render_value(&args.kind, &value, cfg.format));
    Ok(())
}

/// Splits `name=v1,v2` into one axis of the verification grid.
fn parse_set(entry: &IdentityEntry, raw: &str) -> Result<(String, Vec<ParamValue>), Error> {
    let (name, values) = raw
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("--set expects name=value, got `{raw}`")))?;
    let kind = entry
        .params
        .iter()
        .find(|p| p.name == name)
        .map(|p| p.kind)
        .ok_or_else(|| Error::Parse(format!("identity {} has no parameter `{name}`", entry.id)))?;
    let mut parsed = Vec::new();
    for v in values.split(',') {
        let v = v.trim();
        let value = match kind {
            ParamKind::Int => ParamValue::Int(
                v.parse().map_err(|_| Error::Parse(format!("bad integer `{v}` for {name}")))?,
            ),
            ParamKind::Real => ParamValue::Real(parse_decimal(v, 64)?),
        };
        parsed.push(value);
    }
    Ok((name.to_string(), parsed))
}

fn grid_from_sets(entry: &IdentityEntry, sets: &[String]) -> Result<Vec<Binding>, Error> {
    if sets.is_empty() {
        return Ok(entry.default_grid.clone());
    }
    let mut axes = Vec::new();
    for s in sets {
        axes.push(parse_set(entry, s)?);
    }
    let mut grid = vec![Binding::new()];
    for (name, values) in axes {
        let mut next = Vec::with_capacity(grid.len() * values.len());
        for b in &grid {
            for v in &values {
                let mut nb = b.clone();
                nb.insert(name.clone(), v.clone());
                next.push(nb);
            }
        }
        grid = next;
    }
    Ok(grid)
}

fn cmd_verify(args: &VerifyArgs, cfg: &RunConfig) -> ExitCode {
    let prec = match cfg.precision() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let registry = identities::registry();
    let targets: Vec<&IdentityEntry> = if args.all {
        registry.iter().collect()
    } else {
        let id = match &args.id {
            Some(id) => id,
            None => {
                return usage_error(Error::Parse(String::from(
                    "an identity id (or --all) is required",
                )))
            }
        };
        match find_entry(&registry, id) {
            Ok(e) => vec![e],
            Err(e) => return usage_error(e),
        }
    };
    let needs_consts = targets.iter().any(|e| e.mode == Mode::Classical);
    let consts = if needs_consts {
        match Constants::new(&prec) {
            Ok(c) => Some(c),
            Err(e) => return usage_error(e),
        }
    } else {
        None
    };
    let mut all_pass = true;
    for entry in targets {
        let grid = match grid_from_sets(entry, &args.sets) {
            Ok(g) => g,
            Err(e) => return usage_error(e),
        };
        // domain errors are usage errors; validate before evaluating
        for b in &grid {
            if let Err(e) = entry.check_domain(b) {
                return usage_error(e);
            }
        }
        let results: Vec<Result<VerifyReport, Error>> = grid
            .par_iter()
            .map(|b| {
                let ctx = match &consts {
                    Some(c) => EvalCtx::with_consts(prec.clone(), c),
                    None => EvalCtx::new(prec.clone()),
                };
                identities::verify(entry, b, &ctx, cfg.slack)
            })
            .collect();
        let mut reports = Vec::with_capacity(results.len());
        for r in results {
            match r {
                Ok(rep) => reports.push(rep),
                Err(e) => return usage_error(e),
            }
        }
        if cfg.format == Format::Csv {
            emit(&output::csv_header());
        }
        let (reports, summary) = identities::summarize(reports);
        for r in &reports {
            emit(&output::render_report(r, cfg.format));
            if !r.pass {
                all_pass = false;
            }
        }
        emit(&output::render_summary(entry.id, &summary, cfg.format));
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_stuffle(args: &StuffleArgs, cfg: &RunConfig) -> Result<(), Error> {
    let prec = cfg.precision()?;
    // numeric mode needs q; symbolic parsing tolerates a placeholder
    let q = match &args.q {
        Some(s) => QParam::new(parse_decimal(s, prec.bits())?)?,
        None => QParam::from_f64(0.5)?,
    };
    let letters = parse::parse_letters(&args.letters, &q, &prec)?;
    if args.symbolic == args.numeric {
        return Err(Error::Parse(String::from("choose exactly one of --symbolic or --numeric")));
    }
    let product: FormalSum = stuffle_fold(&letters)?;
    if args.symbolic {
        emit(&product.canonical_text());
        return Ok(());
    }
    if args.q.is_none() {
        return Err(Error::Parse(String::from("--numeric requires --q")));
    }
    let value = li_star(&product, &q, &prec)?;
    emit(&output::render_value("li-star", &value, cfg.format));
    Ok(())
}

fn cmd_limits(cfg: &RunConfig) -> Result<(), Error> {
    let prec = cfg.precision()?;
    emit("q-bracket approach to the integer limit: [m]_q vs m");
    emit(&format!("{:>4} {:>10} {:>24} {:>24} {:>24}", "m", "", "q=0.9", "q=0.99", "q=0.999"));
    for m in 1..=10u64 {
        let mut cells = Vec::new();
        for qv in [0.9, 0.99, 0.999] {
            let q = QParam::from_f64(qv)?;
            let b = qeuler_core::numerics::q_bracket_u64(m, &q, &prec)?;
            let err = b
                .value()
                .sub(
                    &astro_float::BigFloat::from_u64(m, prec.bits()),
                    prec.bits(),
                    astro_float::RoundingMode::ToEven,
                )
                .abs();
            cells.push(format!("{:>24}", trunc(&format_decimal(&err), 22)));
        }
        emit(&format!("{:>4} {:>10} {} {} {}", m, "|[m]-m|:", cells[0], cells[1], cells[2]));
    }
    emit("");
    emit("weight-3 linear nested sum vs its classical limit 2 zeta(3):");
    let z3 = zeta_value(3, &prec)?;
    let target = z3.mul(&QReal::from_u64(2, &prec), &prec);
    emit(&format!("  classical value: {}", trunc(&format_decimal(target.value()), 40)));
    for qv in [0.9, 0.99, 0.999] {
        let q = QParam::from_f64(qv)?;
        let spec = qeuler_core::qseries::SeriesSpec::new(
            vec![1],
            vec![astro_float::BigFloat::from_i8(1, 64)],
            2,
            q.q().clone(),
            q.clone(),
        )?;
        // classical normalization: multiply by (1-q)^(weight) to compare
        // the q-sum against the plain sum it deforms
        let v = s_sum(&spec, &prec)?;
        let scale = QReal::exact(q.one_minus_q().clone()).powi(3, &prec);
        let normalized = v.mul(&scale, &prec);
        let diff = normalized.sub(&target, &prec);
        println!(
            "  q={qv}: (1-q)^3 S[1;1|2;q] = {}   gap {}",
            trunc(&format_decimal(normalized.value()), 40),
            trunc(&format_decimal(&diff.value().abs()), 12)
        );
    }
    Ok(())
}

fn trunc(s: &str, n: usize) -> String {
    if let Some(epos) = s.find('e') {
        let (mant, exp) = s.split_at(epos);
        if mant.len() > n {
            return format!("{}{}", &mant[..n], exp);
        }
    }
    s.to_string()
}

fn cmd_list(_cfg: &RunConfig) -> Result<(), Error> {
    let registry = identities::registry();
    for e in &registry {
        println!(
            "{:<18} [{}] {} ({} grid points)",
            e.id,
            match e.mode {
                Mode::NumericQ => "q",
                Mode::Classical => "classical",
            },
            e.description,
            e.default_grid.len()
        );
    }
    Ok(())
}
