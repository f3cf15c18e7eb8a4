//! Mirror maps of each phase, their inverses and integrality checks.
//!
//! A map is stored as the pair of unit factors `u_i` in `q_i = x_i u_i(x)`.

mod product;
mod solve;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{Phase, WeightSystem};
use crate::scalars::{factorial_ratio_seq, harmonic, multinomial, ExactInt, ExactRat};
use crate::series::{revert_pair, Axis, BiSeries, LogSeries, Monomial, SeriesError};

pub use product::{product_form_exponents, Direction, ProductFormExponents};
pub use solve::{recursive_pf_solve, Seed, SolveError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("no {what} in phase {phase}")]
    Unsupported { phase: Phase, what: &'static str },
    #[error("order must be at least {0}")]
    OrderTooSmall(u32),
    #[error("bundles are not related by a unit: Q{which}/q{which} has constant term {constant}")]
    NotUnitRelated { which: usize, constant: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorMapBundle {
    pub weights: WeightSystem,
    pub phase: Phase,
    /// Order of the maps `q_i`; the unit factors carry one less.
    pub order: u32,
    pub u0: BiSeries,
    pub u1: BiSeries,
}

impl MirrorMapBundle {
    pub fn unit(&self, axis: Axis) -> &BiSeries {
        match axis {
            Axis::X0 => &self.u0,
            Axis::X1 => &self.u1,
        }
    }

    /// `q_axis = x_axis u_axis`.
    pub fn map(&self, axis: Axis) -> BiSeries {
        self.unit(axis).shift(axis.unit())
    }

    /// `log u_axis`, the exponent of the map.
    pub fn exponent(&self, axis: Axis) -> BiSeries {
        self.unit(axis).log_unit().expect("bundle units have constant term one")
    }
}

fn rat(v: &ExactInt) -> ExactRat {
    ExactRat::from_integer(v.clone())
}

fn q(n: u64) -> ExactRat {
    ExactRat::from_integer(n.into())
}

/// Largest `m` with `(w1 + 1) m <= order`.
fn diag_count(ws: &WeightSystem, order: u32) -> usize {
    order as usize / (ws.w1() as usize + 1)
}

fn diag(ws: &WeightSystem, m: usize) -> Monomial {
    Monomial::new(ws.w1() as u32 * m as u32, m as u32)
}

/// Holomorphic period `g0 = Σ F(m) (x0^{w1} x1)^m`.
pub fn g0_series(ws: &WeightSystem, order: u32) -> BiSeries {
    let f = factorial_ratio_seq(ws, diag_count(ws, order));
    BiSeries::from_terms(order, f.iter().enumerate().map(|(m, c)| (diag(ws, m), rat(c))))
}

/// Logarithmic period `g0 log x_which + a_which`.
pub fn g1_series(ws: &WeightSystem, order: u32, which: Axis) -> LogSeries {
    let (k, w1) = (ws.k(), ws.w1());
    let f = factorial_ratio_seq(ws, diag_count(ws, order));
    let mut a = BiSeries::zero(order);
    for e in Monomial::up_to(order).skip(1) {
        let (m0, m1) = (e.m0 as u64, e.m1 as u64);
        if m0 == w1 * m1 {
            let m = m1;
            let fm = rat(&f[m as usize]);
            let bracket = match which {
                Axis::X0 => harmonic(k * m) - harmonic(m) / q(w1),
                Axis::X1 => {
                    let rest: ExactRat = ws.rest().iter().map(|&w| harmonic(w * m)).sum();
                    q(k - w1) * harmonic(k * m) - rest
                }
            };
            a.add_term(e, fm * bracket);
        } else {
            let mut parts = vec![m0];
            parts.extend(ws.rest().iter().map(|&w| w * m1));
            let num = ExactRat::from_integer(multinomial(&parts));
            let c = num / ExactRat::from_integer((m0 as i64 - (w1 * m1) as i64).into());
            a.add_term(e, match which {
                Axis::X0 => c,
                Axis::X1 => -c * q(w1),
            });
        }
    }
    let g0 = g0_series(ws, order);
    let log = LogSeries::log_times(which, g0);
    LogSeries::new(a, log.b0, log.b1)
}

/// Compact large-volume map `q_i = x_i exp(a_i / g0)` to order `order`.
pub fn open_closed_map(ws: &WeightSystem, order: u32) -> Result<MirrorMapBundle, MapError> {
    if order == 0 {
        return Err(MapError::OrderTooSmall(1));
    }
    let n = order - 1;
    let g0 = g0_series(ws, n);
    let unit = |axis| -> Result<BiSeries, MapError> {
        let a = g1_series(ws, n, axis).a;
        Ok(a.div_unit(&g0)?.exp_nil()?)
    };
    Ok(MirrorMapBundle { weights: ws.clone(), phase: Phase::CompactLargeVolume, order, u0: unit(Axis::X0)?, u1: unit(Axis::X1)? })
}

/// `x0(q)`, `x1(q)` to the bundle order.
pub fn invert_map(bundle: &MirrorMapBundle) -> Result<(BiSeries, BiSeries), MapError> {
    Ok(revert_pair(&bundle.map(Axis::X0), &bundle.map(Axis::X1))?)
}

/// `G(m) = (km - 1)! / Π (w_i m)!` for `m >= 1`, zero at `m = 0`.
fn g_seq(ws: &WeightSystem, count: usize) -> Vec<ExactRat> {
    let f = factorial_ratio_seq(ws, count);
    f.iter()
        .enumerate()
        .map(|(m, c)| if m == 0 { ExactRat::zero() } else { rat(c) / q(ws.k() * m as u64) })
        .collect()
}

/// `Σ_{m>=1} c_m y^m` with `y = x^step`.
fn in_y(coeffs: &[ExactRat], step: Monomial, order: u32) -> BiSeries {
    BiSeries::from_terms(
        order,
        coeffs.iter().enumerate().skip(1).map(|(m, c)| (Monomial::new(step.m0 * m as u32, step.m1 * m as u32), c.clone())),
    )
}

/// Closed-form local maps `Q_i = x_i exp(e_i)`.
pub fn local_map(ws: &WeightSystem, phase: Phase, order: u32) -> Result<MirrorMapBundle, MapError> {
    if order == 0 {
        return Err(MapError::OrderTooSmall(1));
    }
    let n = order - 1;
    let (k, w1) = (ws.k(), ws.w1());
    let step = match phase {
        Phase::LocalOuter => Monomial::new(0, 1),
        Phase::LocalInnerA => Monomial::new(1, 1),
        Phase::LocalInnerB => Monomial::new(w1 as u32, 1),
        _ => return Err(MapError::Unsupported { phase, what: "local map" }),
    };
    let count = (n / step.degree()) as usize;
    let g = g_seq(ws, count);
    // F(m)/m = k G(m); F(m)/(km) = G(m).
    let (e0, e1): (Vec<ExactRat>, Vec<ExactRat>) = match phase {
        Phase::LocalOuter => (g.iter().map(|c| c * q(k)).collect(), g.iter().map(|c| -c).collect()),
        Phase::LocalInnerA => (g.iter().map(|c| -c).collect(), g.iter().map(|c| c * q(k - 1)).collect()),
        _ => (g.clone(), g.iter().map(|c| c * q(k - w1)).collect()),
    };
    let u0 = in_y(&e0, step, n).exp_nil()?;
    let u1 = in_y(&e1, step, n).exp_nil()?;
    Ok(MirrorMapBundle { weights: ws.clone(), phase, order, u0, u1 })
}

/// Coefficients `C_a` with `x_i = Q_i Σ_a C_a^{(i)} (Q0^{w1} Q1)^a` for the
/// inner-b local map, `a = 0..=count`.
pub fn local_inner_b_inverse(ws: &WeightSystem, count: usize) -> Result<(Vec<ExactRat>, Vec<ExactRat>), MapError> {
    let (k, w1) = (ws.k(), ws.w1());
    let order = count as u32;
    let y = Monomial::new(1, 0);
    let f = factorial_ratio_seq(ws, count);
    let jac = BiSeries::from_terms(order, f.iter().enumerate().map(|(m, c)| (Monomial::new(m as u32, 0), rat(c))));
    let gs = in_y(&g_seq(ws, count), y, order);
    let mut c0 = Vec::with_capacity(count + 1);
    let mut c1 = Vec::with_capacity(count + 1);
    for a in 0..=count as u64 {
        let d = a as u32;
        let coeff = |s: u64| -> Result<ExactRat, MapError> {
            let e = gs.truncate(d).scale(&-q(s)).exp_nil()?;
            Ok(jac.truncate(d).mul(&e).coeff(d, 0))
        };
        c0.push(coeff(k * a + 1)?);
        c1.push(coeff(k * a + k - w1)?);
    }
    Ok((c0, c1))
}

/// `x0(Q)`, `x1(Q)` for the inner-b local map, assembled from
/// [`local_inner_b_inverse`].
pub fn local_inner_b_inverse_series(ws: &WeightSystem, order: u32) -> Result<(BiSeries, BiSeries), MapError> {
    let step = Monomial::new(ws.w1() as u32, 1);
    let count = (order.saturating_sub(1) / step.degree()) as usize;
    let (c0, c1) = local_inner_b_inverse(ws, count)?;
    let build = |c: &[ExactRat], axis: Axis| {
        let base = axis.unit();
        BiSeries::from_terms(
            order,
            c.iter().enumerate().map(|(a, v)| (base + Monomial::new(step.m0 * a as u32, step.m1 * a as u32), v.clone())),
        )
    };
    Ok((build(&c0, Axis::X0), build(&c1, Axis::X1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub series: String,
    pub exponent: Monomial,
    pub value: ExactRat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityReport {
    pub checked_order: u32,
    pub violations: Vec<Violation>,
}

impl IntegralityReport {
    pub fn is_integral(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every non-integral coefficient of degree `<= order`.
pub fn integrality_report(series: &[(&str, &BiSeries)], order: u32) -> IntegralityReport {
    let checked_order = series.iter().map(|(_, s)| s.order()).min().unwrap_or(order).min(order);
    let mut violations = Vec::new();
    for (label, s) in series {
        for (m, c) in s.terms() {
            if m.degree() <= checked_order && !c.is_integer() {
                violations.push(Violation { series: label.to_string(), exponent: m, value: c.clone() });
            }
        }
    }
    IntegralityReport { checked_order, violations }
}

/// Whether every coefficient is an integer and the constant term is one.
pub fn is_integral_unit(s: &BiSeries) -> bool {
    s.constant_term().is_one() && s.is_integral()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{weight_system, PartitionSolution};
    use crate::scalars::{int, ratio};

    fn ws(ks: &[u64], idx: usize) -> WeightSystem {
        weight_system(&PartitionSolution::new(ks.to_vec()).unwrap(), idx).unwrap()
    }

    fn coeffs(s: &BiSeries, d: u32) -> Vec<ExactRat> {
        (0..=d).rev().map(|a| s.coeff(a, d - a)).collect()
    }

    fn ints(v: &[i64]) -> Vec<ExactRat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn g0_of_quadric_pair() {
        let g = g0_series(&ws(&[2, 2], 1), 4);
        assert_eq!(g.coeff(1, 1), int(2));
        assert_eq!(g.coeff(2, 2), int(6));
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn g1_low_terms() {
        let w = ws(&[2, 2], 1);
        let h0 = g1_series(&w, 3, Axis::X0);
        assert_eq!(h0.a.coeff(1, 0), int(1));
        // diagonal F(1)(H_2 - H_1) = 1
        assert_eq!(h0.a.coeff(1, 1), int(1));
        assert_eq!(h0.a.coeff(0, 1), int(-1));
        let h1 = g1_series(&w, 3, Axis::X1);
        assert_eq!(h1.a.coeff(1, 0), int(-1));
        assert_eq!(h1.a.coeff(1, 1), int(1));
        assert_eq!(h1.b1, g0_series(&w, 3));
    }

    #[test]
    fn quadric_compact_map() {
        let b = open_closed_map(&ws(&[2, 2], 1), 6).unwrap();
        let q0 = b.map(Axis::X0);
        assert_eq!(coeffs(&q0, 1), ints(&[1, 0]));
        assert_eq!(coeffs(&q0, 2), ints(&[1, -1, 0]));
        assert_eq!(q0.coeff(3, 3), int(-5));
        assert_eq!(b.map(Axis::X1).coeff(0, 6), int(1));
    }

    #[test]
    fn quadric_inverse() {
        let b = open_closed_map(&ws(&[2, 2], 1), 4).unwrap();
        let (x0, _) = invert_map(&b).unwrap();
        assert_eq!(x0.coeff(2, 0), int(-1));
        assert_eq!(x0.coeff(1, 1), int(1));
        // composing with the map recovers q0 exactly
        let (x0, x1) = invert_map(&b).unwrap();
        let back = b.map(Axis::X0).substitute_pair(&x0, &x1).unwrap();
        assert_eq!(back, BiSeries::var(Axis::X0, 4));
    }

    #[test]
    fn local_maps_of_quadric_pair() {
        let w = ws(&[2, 2], 1);
        let outer = local_map(&w, Phase::LocalOuter, 4).unwrap().map(Axis::X0);
        assert_eq!(coeffs(&outer, 4), ints(&[0, 0, 0, 14, 0]));
        assert_eq!(outer.coeff(1, 1), int(2));
        assert_eq!(outer.coeff(1, 2), int(5));
        let inner = local_map(&w, Phase::LocalInnerB, 7).unwrap();
        let catalan = [1, 1, 2, 5];
        for (m, c) in catalan.iter().enumerate() {
            let m = m as u32;
            assert_eq!(inner.map(Axis::X0).coeff(1 + m, m), int(*c));
            assert_eq!(inner.map(Axis::X1).coeff(m, 1 + m), int(*c));
        }
        assert!(local_map(&w, Phase::CompactTilde, 3).is_err());
    }

    #[test]
    fn cubic_inner_b_map() {
        let b = local_map(&ws(&[3, 3, 3], 1), Phase::LocalInnerB, 7).unwrap();
        // exp(Σ (3m-1)!/(m!)^3 y^m) = 1 + 2y + 17y^2 + 218y^3 ...
        let expect = [1, 2, 17, 218];
        for (m, c) in expect.iter().enumerate() {
            let m = m as u32;
            assert_eq!(b.u0.coeff(m, m), int(*c), "m={m}");
        }
    }

    #[test]
    fn inner_b_inverse_has_unit_leading_term() {
        let (c0, c1) = local_inner_b_inverse(&ws(&[2, 4, 4], 1), 4).unwrap();
        assert_eq!(c0[0], int(1));
        assert_eq!(c1[0], int(1));
        assert_eq!(c0[1], int(-3));
        assert_eq!(c1[1], int(-6));
    }

    #[test]
    fn integrality_flags_fractions() {
        let s = BiSeries::from_terms(3, [(Monomial::new(1, 0), int(1)), (Monomial::new(1, 1), ratio(1, 2))]);
        let r = integrality_report(&[("q0", &s)], 3);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].exponent, Monomial::new(1, 1));
        assert!(integrality_report(&[("q0", &s)], 1).is_integral());
    }
}
