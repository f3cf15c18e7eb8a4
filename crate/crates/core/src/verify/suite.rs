//! Named verification suites.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

use super::{check_annihilation, golden_corpus, local_constant, local_log_solutions, obstruction_constant, tilde_solutions, Fixture};
use crate::geometry::{enumerate_solutions, pf_operators, weight_system, PartitionSolution, Phase, WeightSystem};
use crate::mirrormaps::{
    g0_series, g1_series, integrality_report, invert_map, local_inner_b_inverse_series, local_map, open_closed_map,
    product_form_exponents, recursive_pf_solve, MapError, Seed, SolveError,
};
use crate::scalars::{format_rat, ExactRat};
use crate::series::{lagrange_good_coeff, Axis, BiSeries, LogSeries, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Paper,
    Integrality,
    Oracles,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Paper => "paper",
            Suite::Integrality => "integrality",
            Suite::Oracles => "oracles",
        }
    }

    /// Order used when none is given: the whole corpus for `Paper`.
    pub fn default_order(self) -> u32 {
        match self {
            Suite::Paper => golden_corpus().iter().map(|f| f.exponent.degree()).max().unwrap_or(0),
            Suite::Integrality | Suite::Oracles => 8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Suite::Paper),
            "integrality" => Ok(Suite::Integrality),
            "oracles" => Ok(Suite::Oracles),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { id: id.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub order: u32,
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    pub fn ok(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

/// Runs a suite with `jobs` worker threads (`0` picks the default).
pub fn run_suite(suite: Suite, max_order: u32, jobs: usize) -> SuiteReport {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let results = pool.install(|| match suite {
        Suite::Paper => paper(max_order),
        Suite::Integrality => integrality(max_order),
        Suite::Oracles => oracles(max_order),
    });
    SuiteReport { suite, order: max_order, results }
}

/// Computes the series named in the corpus for one case and phase.
pub fn named_series(ws: &WeightSystem, phase: Phase, label: &str, order: u32) -> Result<BiSeries, MapError> {
    let axis = |s: &str| if s.contains('0') { Axis::X0 } else { Axis::X1 };
    let pick = |pair: (BiSeries, BiSeries), a: Axis| if a == Axis::X0 { pair.0 } else { pair.1 };
    Ok(match (phase, label) {
        (Phase::CompactLargeVolume, "q0" | "q1") => open_closed_map(ws, order)?.map(axis(label)),
        (Phase::CompactLargeVolume, "x0(q)" | "x1(q)") => pick(invert_map(&open_closed_map(ws, order)?)?, axis(label)),
        (Phase::LocalInnerB, "Q0" | "Q1") => local_map(ws, phase, order)?.map(axis(label)),
        (Phase::LocalInnerB, "x0(Q)" | "x1(Q)") => pick(local_inner_b_inverse_series(ws, order)?, axis(label)),
        (Phase::LocalInnerB, "q0(Q)" | "q1(Q)") => {
            let (x0, x1) = local_inner_b_inverse_series(ws, order)?;
            open_closed_map(ws, order)?.map(axis(label)).substitute_pair(&x0, &x1)?
        }
        (Phase::LocalInnerB, "Q0(q)" | "Q1(q)") => {
            let (x0, x1) = invert_map(&open_closed_map(ws, order)?)?;
            local_map(ws, phase, order)?.map(axis(label)).substitute_pair(&x0, &x1)?
        }
        _ => return Err(MapError::Unsupported { phase, what: "series with this label" }),
    })
}

fn paper(max_order: u32) -> Vec<CheckResult> {
    let mut groups: BTreeMap<(String, Phase, String), Vec<Fixture>> = BTreeMap::new();
    for f in golden_corpus().into_iter().filter(|f| f.exponent.degree() <= max_order) {
        groups.entry((f.case.clone(), f.phase, f.series.clone())).or_default().push(f);
    }
    let groups: Vec<_> = groups.into_values().collect();
    groups
        .par_iter()
        .flat_map_iter(|fx| {
            let head = &fx[0];
            let order = fx.iter().map(|f| f.exponent.degree()).max().unwrap_or(0);
            let got = named_series(&head.weights, head.phase, &head.series, order);
            fx.iter()
                .map(|f| match &got {
                    Ok(s) => {
                        let v = s.get(f.exponent).cloned().unwrap_or_default();
                        let expect = ExactRat::from_integer(f.value.clone());
                        let detail = format!("expected {} got {}", f.value, format_rat(&v));
                        CheckResult::new(f.id(), v == expect, detail)
                    }
                    Err(e) => CheckResult::new(f.id(), false, e.to_string()),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Distinct weight systems over every brane choice of every solution with
/// `n <= max_n`.
pub fn sweep_systems(max_n: usize) -> Vec<WeightSystem> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for n in 2..=max_n {
        for s in enumerate_solutions(n, true).expect("n in range") {
            for idx in 1..=n {
                let ws = weight_system(&s, idx).expect("index in range");
                if seen.insert(ws.canonical_key()) {
                    out.push(ws);
                }
            }
        }
    }
    out
}

fn integrality(max_order: u32) -> Vec<CheckResult> {
    let systems = sweep_systems(4);
    let mut results: Vec<CheckResult> = systems
        .par_iter()
        .flat_map_iter(|ws| {
            let id = |what: &str| format!("integrality|{ws}|{what}");
            if max_order == 0 {
                return vec![];
            }
            let bundle = match open_closed_map(ws, max_order) {
                Ok(b) => b,
                Err(e) => return vec![CheckResult::new(id("map"), false, e.to_string())],
            };
            let (q0, q1) = (bundle.map(Axis::X0), bundle.map(Axis::X1));
            let mut out = vec![report(id("q"), &[("q0", &q0), ("q1", &q1)], max_order)];
            match invert_map(&bundle) {
                Ok((x0, x1)) => out.push(report(id("x(q)"), &[("x0", &x0), ("x1", &x1)], max_order)),
                Err(e) => out.push(CheckResult::new(id("x(q)"), false, e.to_string())),
            }
            out
        })
        .collect();
    for ks in [[2u64, 2].as_slice(), &[3, 3, 3]] {
        let ws = weight_system(&PartitionSolution::new(ks.to_vec()).expect("valid"), 1).expect("valid");
        results.extend(product_form_checks(&ws, max_order));
    }
    results
}

fn report(id: String, series: &[(&str, &BiSeries)], order: u32) -> CheckResult {
    let r = integrality_report(series, order);
    let detail = match r.violations.first() {
        None => format!("integral through degree {}", r.checked_order),
        Some(v) => format!("{} violations, first {} at ({}) = {}", r.violations.len(), v.series, v.exponent, format_rat(&v.value)),
    };
    CheckResult::new(id, r.is_integral(), detail)
}

fn product_form_checks(ws: &WeightSystem, order: u32) -> Vec<CheckResult> {
    if order == 0 {
        return vec![];
    }
    let run = || -> Result<Vec<CheckResult>, MapError> {
        let compact = open_closed_map(ws, order + 1)?;
        let local = local_map(ws, Phase::LocalInnerB, order + 1)?;
        let mut out = Vec::new();
        for (from, to) in [(&compact, &local), (&local, &compact)] {
            for axis in [Axis::X0, Axis::X1] {
                let p = product_form_exponents(from, to, order, axis)?;
                let id = format!("product-form|{ws}|{}|{}", p.direction.name(), axis.index());
                let bad = p.table.iter().find(|(_, v)| !v.is_integer());
                let detail = match bad {
                    None => format!("{} nonzero exponents, all integral", p.table.len()),
                    Some((m, v)) => format!("exponent at ({m}) = {}", format_rat(v)),
                };
                out.push(CheckResult::new(id, bad.is_none(), detail));
            }
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![CheckResult::new(format!("product-form|{ws}"), false, e.to_string())])
}

fn oracle_systems() -> Vec<WeightSystem> {
    [[2u64, 2].as_slice(), &[2, 4, 4]]
        .iter()
        .map(|ks| weight_system(&PartitionSolution::new(ks.to_vec()).expect("valid"), 1).expect("valid"))
        .collect()
}

fn oracles(max_order: u32) -> Vec<CheckResult> {
    let systems = oracle_systems();
    systems.par_iter().flat_map_iter(|ws| oracle_checks(ws, max_order)).collect()
}

fn oracle_checks(ws: &WeightSystem, order: u32) -> Vec<CheckResult> {
    let id = |what: &str| format!("oracle|{ws}|{what}");
    let mut out = Vec::new();
    if order == 0 {
        return out;
    }
    out.extend(lagrange_good_vs_reversion(ws, order, &id));
    out.extend(recursive_vs_closed(ws, order, &id));
    let ops = pf_operators(ws, Phase::CompactLargeVolume);
    for (i, s) in super::compact_solutions(ws, order).iter().enumerate() {
        out.push(annihilated(id(&format!("compact|solution {i}")), &ops, s));
    }
    for phase in [Phase::LocalOuter, Phase::LocalInnerA, Phase::LocalInnerB] {
        let ops = pf_operators(ws, phase);
        out.push(annihilated(id(&format!("{phase}|constant")), &ops, &local_constant(order)));
        match local_map(ws, phase, order + 1) {
            Ok(b) => {
                for (i, s) in local_log_solutions(&b).iter().enumerate() {
                    out.push(annihilated(id(&format!("{phase}|log x{i}")), &ops, s));
                }
            }
            Err(e) => out.push(CheckResult::new(id(phase.name()), false, e.to_string())),
        }
    }
    out.extend(tilde_checks(ws, order, &id));
    out
}

fn annihilated(id: String, ops: &[crate::series::ThetaOperator], s: &LogSeries) -> CheckResult {
    for (j, op) in ops.iter().enumerate() {
        let r = check_annihilation(op, s);
        if let super::Residual::Nonzero { exponent, value, component, .. } = r {
            return CheckResult::new(id, false, format!("operator {j}: {component} at ({exponent}) = {}", format_rat(&value)));
        }
    }
    CheckResult::new(id, true, format!("{} operators annihilate", ops.len()))
}

fn lagrange_good_vs_reversion(ws: &WeightSystem, order: u32, id: &dyn Fn(&str) -> String) -> Vec<CheckResult> {
    let run = || -> Result<Vec<CheckResult>, MapError> {
        let b = open_closed_map(ws, order)?;
        let (x0, x1) = invert_map(&b)?;
        let (h0, h1) = (b.exponent(Axis::X0), b.exponent(Axis::X1));
        let mut out = Vec::new();
        for (axis, x) in [(Axis::X0, &x0), (Axis::X1, &x1)] {
            let mut mismatch = None;
            for m in Monomial::up_to(order).skip(1) {
                let lg = lagrange_good_coeff(m.m0, m.m1, &h0, &h1, axis)?;
                if lg != x.get(m).cloned().unwrap_or_default() {
                    mismatch = Some(m);
                    break;
                }
            }
            let name = id(&format!("lagrange-good|x{}", axis.index()));
            out.push(match mismatch {
                None => CheckResult::new(name, true, format!("agrees with reversion through degree {order}")),
                Some(m) => CheckResult::new(name, false, format!("differs from reversion at ({m})")),
            });
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![CheckResult::new(id("lagrange-good"), false, e.to_string())])
}

fn recursive_vs_closed(ws: &WeightSystem, order: u32, id: &dyn Fn(&str) -> String) -> Vec<CheckResult> {
    let ops = pf_operators(ws, Phase::CompactLargeVolume);
    let closed = [
        (Seed::Holomorphic, LogSeries::pure(g0_series(ws, order))),
        (Seed::Log(Axis::X0), g1_series(ws, order, Axis::X0)),
        (Seed::Log(Axis::X1), g1_series(ws, order, Axis::X1)),
    ];
    closed
        .iter()
        .map(|(seed, expect)| {
            let name = id(&format!("recursive|{seed:?}"));
            match recursive_pf_solve(&ops, *seed, order) {
                Ok(s) if &s == expect => CheckResult::new(name, true, format!("matches closed form through degree {order}")),
                Ok(_) => CheckResult::new(name, false, "differs from closed form"),
                Err(e) => CheckResult::new(name, false, e.to_string()),
            }
        })
        .collect()
}

fn tilde_checks(ws: &WeightSystem, order: u32, id: &dyn Fn(&str) -> String) -> Vec<CheckResult> {
    let ops = pf_operators(ws, Phase::CompactTilde);
    let (g0, g1) = tilde_solutions(ws, order);
    let sols = [LogSeries::pure(g0), g1];
    let mut out = Vec::new();
    for (j, name) in [(0, "L0"), (2, "L1'")] {
        let clean = sols.iter().all(|s| check_annihilation(&ops[j], s).is_clean());
        out.push(CheckResult::new(id(&format!("tilde|{name} annihilates")), clean, ""));
    }
    let fails = sols.iter().all(|s| !check_annihilation(&ops[1], s).is_clean());
    out.push(CheckResult::new(
        id("tilde|L1 leaves a residual"),
        fails,
        if fails { "nonzero residual" } else { "L1 annihilates both tilde solutions" },
    ));
    let obstructed = matches!(recursive_pf_solve(&ops, Seed::Log(Axis::X0), order), Err(SolveError::Obstruction { .. }));
    out.push(CheckResult::new(id("tilde|log x0 solve obstructed"), obstructed, ""));
    let c = obstruction_constant(ws.k());
    out.push(CheckResult::new(id("tilde|obstruction constant"), !c.is_zero(), format!("k! H_k = {}", format_rat(&c))));
    out
}
