//! Command-line front end: `enumerate`, `map`, `invert`, `check`, `product-form`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad usage or input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::geometry::{enumerate_solutions, weight_system, PartitionSolution, Phase, WeightSystem};
use crate::mirrormaps::{
    integrality_report, invert_map, local_map, open_closed_map, product_form_exponents, IntegralityReport, MirrorMapBundle,
};
use crate::scalars::format_rat;
use crate::series::{Axis, BiSeries, SeriesRecord};
use crate::verify::{run_suite, Suite, SuiteReport};

pub const DEFAULT_ORDER: u32 = 8;

#[derive(Debug, Parser)]
#[command(name = "ocmirror", about = "Exact open-closed mirror maps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhaseArg {
    Compact,
    CompactTilde,
    LocalOuter,
    LocalInnerA,
    LocalInnerB,
}

impl From<PhaseArg> for Phase {
    fn from(p: PhaseArg) -> Phase {
        match p {
            PhaseArg::Compact => Phase::CompactLargeVolume,
            PhaseArg::CompactTilde => Phase::CompactTilde,
            PhaseArg::LocalOuter => Phase::LocalOuter,
            PhaseArg::LocalInnerA => Phase::LocalInnerA,
            PhaseArg::LocalInnerB => Phase::LocalInnerB,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Paper,
    Integrality,
    Oracles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Alpha,
    Beta,
}

#[derive(Debug, clap::Args)]
struct CaseArgs {
    /// Comma-separated k_1..k_n with Σ 1/k_i = 1.
    #[arg(long)]
    k: String,
    /// 1-based index of the brane factor.
    #[arg(long, default_value_t = 1)]
    brane: usize,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List solutions of Σ 1/k_i = 1.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=6))]
        n: u8,
        /// Only nondecreasing tuples.
        #[arg(long)]
        ordered: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Expand the mirror map of a phase.
    Map {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value_t = PhaseArg::Compact)]
        phase: PhaseArg,
    },
    /// Expand the inverse mirror map.
    Invert {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value_t = PhaseArg::Compact)]
        phase: PhaseArg,
    },
    /// Run a verification suite.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Defaults to 8, or the highest corpus degree for the paper suite.
        #[arg(long)]
        order: Option<u32>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Product-form exponents between the compact and inner-b local maps.
    ProductForm {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::Alpha)]
        direction: DirectionArg,
    },
}

enum Failure {
    Usage(String),
    Check,
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Enumerate { n, ordered, format } => cmd_enumerate(n as usize, ordered, format, out),
        Command::Map { case, phase } => cmd_map(&case, phase.into(), false, out),
        Command::Invert { case, phase } => cmd_map(&case, phase.into(), true, out),
        Command::Check { suite, order, jobs, format } => cmd_check(suite, order, jobs, format, out),
        Command::ProductForm { case, direction } => cmd_product(&case, direction, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(usage)
}

fn json<T: Serialize>(out: &mut dyn Write, v: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(v).map_err(usage)?;
    s.push('\n');
    emit(out, &s)
}

#[derive(Serialize)]
struct EnumerateOut {
    n: usize,
    ordered: bool,
    count: usize,
    solutions: Vec<Vec<u64>>,
}

fn cmd_enumerate(n: usize, ordered: bool, format: Format, out: &mut dyn Write) -> Outcome {
    let sols = enumerate_solutions(n, ordered).map_err(usage)?;
    match format {
        Format::Json => json(out, &EnumerateOut { n, ordered, count: sols.len(), solutions: sols.iter().map(|s| s.ks().to_vec()).collect() }),
        Format::Text => {
            let mut s = String::new();
            for sol in &sols {
                s.push_str(&format!("{sol}\n"));
            }
            s.push_str(&format!("{} solutions\n", sols.len()));
            emit(out, &s)
        }
    }
}

fn case_weights(case: &CaseArgs) -> Result<WeightSystem, Failure> {
    let ks: PartitionSolution = case.k.parse().map_err(usage)?;
    weight_system(&ks, case.brane).map_err(usage)
}

fn bundle_for(ws: &WeightSystem, phase: Phase, order: u32) -> Result<MirrorMapBundle, Failure> {
    match phase {
        Phase::CompactLargeVolume => open_closed_map(ws, order).map_err(usage),
        Phase::CompactTilde => Err(usage("compact-tilde has no mirror map: the log x0 solution is obstructed")),
        _ => local_map(ws, phase, order).map_err(usage),
    }
}

#[derive(Serialize)]
struct WeightsOut {
    k: u64,
    w: Vec<u64>,
}

#[derive(Serialize)]
struct ViolationOut {
    series: String,
    e: [u32; 2],
    v: String,
}

#[derive(Serialize)]
struct MapOut {
    weights: WeightsOut,
    phase: String,
    order: u32,
    series: BTreeMap<String, Vec<SeriesRecord>>,
    integral: bool,
    violations: Vec<ViolationOut>,
}

fn violations(r: &IntegralityReport) -> Vec<ViolationOut> {
    r.violations
        .iter()
        .map(|v| ViolationOut { series: v.series.clone(), e: [v.exponent.m0, v.exponent.m1], v: format_rat(&v.value) })
        .collect()
}

fn cmd_map(case: &CaseArgs, phase: Phase, invert: bool, out: &mut dyn Write) -> Outcome {
    let ws = case_weights(case)?;
    if case.order == 0 {
        return Err(usage("order must be at least 1"));
    }
    let bundle = bundle_for(&ws, phase, case.order)?;
    let mut named: Vec<(String, BiSeries)> = Vec::new();
    if invert {
        let (x0, x1) = invert_map(&bundle).map_err(usage)?;
        named.push(("x0".into(), x0));
        named.push(("x1".into(), x1));
    } else {
        named.push(("q0".into(), bundle.map(Axis::X0)));
        named.push(("q1".into(), bundle.map(Axis::X1)));
        if phase.is_local() {
            named.push(("e0".into(), bundle.exponent(Axis::X0)));
            named.push(("e1".into(), bundle.exponent(Axis::X1)));
        }
    }
    // Only the maps themselves are subject to integrality; exponents are not.
    let checked: Vec<(&str, &BiSeries)> =
        named.iter().filter(|(n, _)| !n.starts_with('e')).map(|(n, s)| (n.as_str(), s)).collect();
    let report = integrality_report(&checked, case.order);
    match case.format {
        Format::Json => json(
            out,
            &MapOut {
                weights: WeightsOut { k: ws.k(), w: ws.weights().to_vec() },
                phase: phase.name().into(),
                order: case.order,
                series: named.iter().map(|(n, s)| (n.clone(), s.to_records())).collect(),
                integral: report.is_integral(),
                violations: violations(&report),
            },
        ),
        Format::Text => {
            let mut s = format!("{ws} {phase} order {}\n", case.order);
            for (n, ser) in &named {
                s.push_str(&format!("{n} = {ser}\n"));
            }
            s.push_str(&format!("integral: {}\n", report.is_integral()));
            emit(out, &s)
        }
    }
}


#[derive(Serialize)]
struct CheckOut<'a> {
    suite: &'a str,
    order: u32,
    checks: usize,
    passed: usize,
    failed: usize,
    results: Vec<CheckResultOut<'a>>,
}

#[derive(Serialize)]
struct CheckResultOut<'a> {
    id: &'a str,
    pass: bool,
    detail: &'a str,
}

fn cmd_check(suite: SuiteArg, order: Option<u32>, jobs: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let suite = match suite {
        SuiteArg::Paper => Suite::Paper,
        SuiteArg::Integrality => Suite::Integrality,
        SuiteArg::Oracles => Suite::Oracles,
    };
    let report = run_suite(suite, order.unwrap_or_else(|| suite.default_order()), jobs);
    match format {
        Format::Json => json(out, &check_json(&report))?,
        Format::Text => {
            let mut s = String::new();
            for r in report.failures() {
                s.push_str(&format!("FAIL {}: {}\n", r.id, r.detail));
            }
            s.push_str(&format!(
                "{} suite, order {}: {} checks, {} passed, {} failed\n",
                report.suite,
                report.order,
                report.results.len(),
                report.passed(),
                report.failed()
            ));
            emit(out, &s)?;
        }
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn check_json(report: &SuiteReport) -> CheckOut<'_> {
    CheckOut {
        suite: report.suite.name(),
        order: report.order,
        checks: report.results.len(),
        passed: report.passed(),
        failed: report.failed(),
        results: report.results.iter().map(|r| CheckResultOut { id: &r.id, pass: r.passed, detail: &r.detail }).collect(),
    }
}

#[derive(Serialize)]
struct ProductOut {
    weights: WeightsOut,
    direction: &'static str,
    order: u32,
    tables: BTreeMap<String, Vec<SeriesRecord>>,
    integral: bool,
}

fn cmd_product(case: &CaseArgs, direction: DirectionArg, out: &mut dyn Write) -> Outcome {
    let ws = case_weights(case)?;
    if case.order == 0 {
        return Err(usage("order must be at least 1"));
    }
    let compact = open_closed_map(&ws, case.order + 1).map_err(usage)?;
    let local = local_map(&ws, Phase::LocalInnerB, case.order + 1).map_err(usage)?;
    let (from, to) = match direction {
        DirectionArg::Alpha => (&compact, &local),
        DirectionArg::Beta => (&local, &compact),
    };
    let mut tables = BTreeMap::new();
    let mut integral = true;
    let mut name = "alpha";
    for axis in [Axis::X0, Axis::X1] {
        let p = product_form_exponents(from, to, case.order, axis).map_err(usage)?;
        integral &= p.is_integral();
        name = p.direction.name();
        let records = p.table.iter().map(|(m, v)| SeriesRecord { e: [m.m0, m.m1], v: format_rat(v) }).collect();
        tables.insert(axis.index().to_string(), records);
    }
    match case.format {
        Format::Json => json(
            out,
            &ProductOut { weights: WeightsOut { k: ws.k(), w: ws.weights().to_vec() }, direction: name, order: case.order, tables, integral },
        ),
        Format::Text => {
            let mut s = format!("{ws} {name} order {}\n", case.order);
            for (i, recs) in &tables {
                let body: Vec<String> = recs.iter().map(|r| format!("({},{}): {}", r.e[0], r.e[1], r.v)).collect();
                s.push_str(&format!("{name}{i}: {}\n", if body.is_empty() { "all zero".into() } else { body.join(", ") }));
            }
            s.push_str(&format!("integral: {integral}\n"));
            emit(out, &s)
        }
    }
}
