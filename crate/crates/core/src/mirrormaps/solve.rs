//! Degree-by-degree solution of a Picard-Fuchs system.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalars::{format_rat, ExactRat};
use crate::series::{Axis, BiSeries, LogSeries, Monomial, ThetaOperator, ThetaPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    /// Constant term one, no logarithm.
    Holomorphic,
    /// `g0 log x_axis + a` with `a(0) = 0`.
    Log(Axis),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("operator {operator} is obstructed at x^({exponent}): residual {}", format_rat(.residual))]
    Obstruction { operator: usize, exponent: Monomial, residual: ExactRat },
    #[error("coefficient at x^({0}) is not fixed by the system")]
    Underdetermined(Monomial),
}

struct Part<'a> {
    shift: Monomial,
    poly: &'a ThetaPoly,
    d0: ThetaPoly,
    d1: ThetaPoly,
}

/// Solves `L_j S = 0` for every operator, fixing the coefficient of each
/// `x^e` from the unshifted parts and checking every other equation there.
pub fn recursive_pf_solve(ops: &[ThetaOperator], seed: Seed, order: u32) -> Result<LogSeries, SolveError> {
    let parts: Vec<Vec<Part>> = ops
        .iter()
        .map(|op| {
            op.terms()
                .iter()
                .map(|(s, p)| Part { shift: *s, poly: p, d0: p.partial(Axis::X0), d1: p.partial(Axis::X1) })
                .collect()
        })
        .collect();
    let (log_axis, b) = match seed {
        Seed::Holomorphic => (None, BiSeries::zero(order)),
        Seed::Log(axis) => (Some(axis), recursive_pf_solve(ops, Seed::Holomorphic, order)?.a),
    };
    let mut a = BiSeries::zero(order);
    for e in Monomial::up_to(order) {
        let mut eqs = Vec::with_capacity(ops.len());
        for (j, op) in parts.iter().enumerate() {
            let mut c = ExactRat::zero();
            let mut r = ExactRat::zero();
            for part in op {
                let Some(src) = e.checked_sub(part.shift) else { continue };
                if part.shift == Monomial::ONE {
                    c += part.poly.eval(e.m0, e.m1);
                } else if let Some(v) = a.get(src) {
                    r += part.poly.eval(src.m0, src.m1) * v;
                }
                if let (Some(axis), Some(v)) = (log_axis, b.get(src)) {
                    let d = if axis == Axis::X0 { &part.d0 } else { &part.d1 };
                    r += d.eval(src.m0, src.m1) * v;
                }
            }
            eqs.push((j, c, r));
        }
        let value = if e == Monomial::ONE {
            if seed == Seed::Holomorphic { ExactRat::one() } else { ExactRat::zero() }
        } else {
            match eqs.iter().find(|(_, c, _)| !c.is_zero()) {
                Some((_, c, r)) => -r / c,
                None => {
                    if let Some((j, _, r)) = eqs.iter().find(|(_, _, r)| !r.is_zero()) {
                        return Err(SolveError::Obstruction { operator: *j, exponent: e, residual: r.clone() });
                    }
                    return Err(SolveError::Underdetermined(e));
                }
            }
        };
        for (j, c, r) in &eqs {
            let residual = c * &value + r;
            if !residual.is_zero() {
                return Err(SolveError::Obstruction { operator: *j, exponent: e, residual });
            }
        }
        a.add_term(e, value);
    }
    Ok(match log_axis {
        None => LogSeries::pure(a),
        Some(axis) => {
            let l = LogSeries::log_times(axis, b);
            LogSeries::new(a, l.b0, l.b1)
        }
    })
}
