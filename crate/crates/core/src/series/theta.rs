//! Polynomials in the Euler operators `θ0`, `θ1` and the shifted operators
//! `Σ x^s p_s(θ)` built from them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Axis, BiSeries, LogSeries, Monomial};
use crate::scalars::ExactRat;

/// Sparse polynomial `Σ c_{ab} θ0^a θ1^b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThetaPoly {
    coeffs: BTreeMap<(u32, u32), ExactRat>,
}

impl ThetaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactRat::one())
    }

    pub fn constant(c: ExactRat) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    /// `c + c0 θ0 + c1 θ1`.
    pub fn affine(c: i64, c0: i64, c1: i64) -> Self {
        let r = |v: i64| ExactRat::from_integer(v.into());
        Self::from_terms([((0, 0), r(c)), ((1, 0), r(c0)), ((0, 1), r(c1))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), ExactRat)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: ExactRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(ExactRat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &ExactRat)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in o.terms() {
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }

    pub fn scale_int(&self, s: i64) -> Self {
        let s = ExactRat::from_integer(s.into());
        Self::from_terms(self.terms().map(|(e, c)| (e, c * &s)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for ((a0, a1), ca) in self.terms() {
            for ((b0, b1), cb) in o.terms() {
                p.add_term((a0 + b0, a1 + b1), ca * cb);
            }
        }
        p
    }

    pub fn product(factors: impl IntoIterator<Item = Self>) -> Self {
        factors.into_iter().fold(Self::one(), |acc, f| acc.mul(&f))
    }

    /// Formal derivative in `θ_axis`.
    pub fn partial(&self, axis: Axis) -> Self {
        Self::from_terms(self.terms().filter_map(|((a, b), c)| {
            let (p, e) = match axis {
                Axis::X0 => (a, (a.checked_sub(1)?, b)),
                Axis::X1 => (b, (a, b.checked_sub(1)?)),
            };
            Some((e, c * ExactRat::from_integer(p.into())))
        }))
    }

    /// Value at `θ0 = m0`, `θ1 = m1`.
    pub fn eval(&self, m0: u32, m1: u32) -> ExactRat {
        let deg = self.degree() as usize;
        let powers = |x: u32| {
            let mut v = vec![BigInt::one()];
            for i in 1..=deg {
                let next = &v[i - 1] * x;
                v.push(next);
            }
            v
        };
        let (p0, p1) = (powers(m0), powers(m1));
        let mut acc = ExactRat::zero();
        for ((a, b), c) in self.terms() {
            let m = &p0[a as usize] * &p1[b as usize];
            if !m.is_zero() {
                acc += c * ExactRat::from_integer(m);
            }
        }
        acc
    }
}

/// `Σ_s x^s p_s(θ)` with nonnegative shifts, kept sorted by shift with
/// zero parts removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaOperator {
    terms: Vec<(Monomial, ThetaPoly)>,
}

impl ThetaOperator {
    pub fn new(terms: Vec<(Monomial, ThetaPoly)>) -> Self {
        let mut merged: BTreeMap<Monomial, ThetaPoly> = BTreeMap::new();
        for (s, p) in terms {
            let slot = merged.entry(s).or_default();
            *slot = slot.add(&p);
        }
        Self { terms: merged.into_iter().filter(|(_, p)| !p.is_zero()).collect() }
    }

    /// The bare operator `θ_axis`.
    pub fn theta(axis: Axis) -> Self {
        let p = match axis {
            Axis::X0 => ThetaPoly::affine(0, 1, 0),
            Axis::X1 => ThetaPoly::affine(0, 0, 1),
        };
        Self::new(vec![(Monomial::ONE, p)])
    }

    pub fn terms(&self) -> &[(Monomial, ThetaPoly)] {
        &self.terms
    }

    pub fn max_shift_degree(&self) -> u32 {
        self.terms.iter().map(|(s, _)| s.degree()).max().unwrap_or(0)
    }

    /// Sum of the unshifted parts evaluated at `m`.
    pub fn diagonal_at(&self, m: Monomial) -> ExactRat {
        self.terms.iter().filter(|(s, _)| *s == Monomial::ONE).map(|(_, p)| p.eval(m.m0, m.m1)).sum()
    }

    pub fn apply(&self, s: &LogSeries) -> LogSeries {
        apply_op(self, s)
    }
}

/// Applies the operator to `a + b0 log x0 + b1 log x1`.
///
/// For a polynomial `p`, `p(θ)(b log x_i) = (p(θ) b) log x_i + (∂_i p)(θ) b`,
/// so the result stays in the same shape. The result order is the input
/// order less the largest shift degree.
pub fn apply_op(op: &ThetaOperator, s: &LogSeries) -> LogSeries {
    let order = s.order().saturating_sub(op.max_shift_degree());
    let mut a = BiSeries::zero(order);
    let mut b0 = BiSeries::zero(order);
    let mut b1 = BiSeries::zero(order);
    for (shift, p) in op.terms() {
        let d0 = p.partial(Axis::X0);
        let d1 = p.partial(Axis::X1);
        let visit = |src: &BiSeries, f: &mut dyn FnMut(Monomial, Monomial, &ExactRat)| {
            for (m, c) in src.terms() {
                if m.degree() + shift.degree() > order {
                    break;
                }
                f(m, m + *shift, c);
            }
        };
        visit(&s.a, &mut |m, t, c| a.add_term(t, p.eval(m.m0, m.m1) * c));
        visit(&s.b0, &mut |m, t, c| {
            a.add_term(t, d0.eval(m.m0, m.m1) * c);
            b0.add_term(t, p.eval(m.m0, m.m1) * c);
        });
        visit(&s.b1, &mut |m, t, c| {
            a.add_term(t, d1.eval(m.m0, m.m1) * c);
            b1.add_term(t, p.eval(m.m0, m.m1) * c);
        });
    }
    LogSeries::new(a, b0, b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn theta0_on_monomial() {
        let x = BiSeries::monomial(Monomial::new(2, 1), int(1), 3);
        let r = ThetaOperator::theta(Axis::X0).apply(&LogSeries::pure(x));
        assert_eq!(r.a, BiSeries::monomial(Monomial::new(2, 1), int(2), 3));
    }

    #[test]
    fn theta_on_log() {
        // θ0 (log x0) = 1
        let r = ThetaOperator::theta(Axis::X0).apply(&LogSeries::log_times(Axis::X0, BiSeries::one(2)));
        assert_eq!(r.a, BiSeries::one(2));
        assert!(r.b0.is_zero());
        // θ1 θ1 (x1 log x1) = x1 log x1 + 2 x1
        let sq = ThetaOperator::new(vec![(Monomial::ONE, ThetaPoly::affine(0, 0, 1).mul(&ThetaPoly::affine(0, 0, 1)))]);
        let x1 = BiSeries::var(Axis::X1, 3);
        let r = sq.apply(&LogSeries::log_times(Axis::X1, x1.clone()));
        assert_eq!(r.a, x1.scale(&int(2)));
        assert_eq!(r.b1, x1);
    }

    #[test]
    fn operator_canonical_form() {
        let p = ThetaPoly::affine(1, 1, 0);
        let a = ThetaOperator::new(vec![(Monomial::new(1, 0), p.clone()), (Monomial::ONE, p.clone()), (Monomial::new(1, 0), p.neg())]);
        let b = ThetaOperator::new(vec![(Monomial::ONE, p)]);
        assert_eq!(a, b);
    }

    #[test]
    fn poly_eval_and_partial() {
        // (θ0 + 2θ1 + 1)(θ0 - 1)
        let p = ThetaPoly::affine(1, 1, 2).mul(&ThetaPoly::affine(-1, 1, 0));
        assert_eq!(p.eval(3, 1), int(12));
        assert_eq!(p.partial(Axis::X0).eval(3, 1), int(8));
        assert_eq!(p.partial(Axis::X1).eval(3, 1), int(4));
    }
}
