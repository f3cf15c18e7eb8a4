//! Truncated bivariate power series over exact rationals.
//!
//! A [`BiSeries`] of order `N` holds every coefficient of total degree
//! `<= N`; anything above is unknown and never stored. Binary operations
//! truncate to the smaller of the two orders.

mod log;
mod revert;
mod theta;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{format_rat, parse_rat, ExactRat, ScalarError};

pub use log::LogSeries;
pub use revert::{lagrange_good_coeff, revert_pair};
pub use theta::{apply_op, ThetaOperator, ThetaPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term must be nonzero")]
    NonInvertible,
    #[error("constant term must be zero")]
    NonNilpotent,
    #[error("constant term must be one")]
    NonUnit,
    #[error("series is not {0} times a unit")]
    NotDivisible(String),
    #[error("coefficient of degree {needed} needs order {needed}, series has order {have}")]
    InsufficientOrder { needed: u32, have: u32 },
    #[error("bad record: {0}")]
    Record(#[from] ScalarError),
}

/// Which of the two variables `x0`, `x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X0,
    X1,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X0 => 0,
            Axis::X1 => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            0 => Some(Axis::X0),
            1 => Some(Axis::X1),
            _ => None,
        }
    }

    pub fn unit(self) -> Monomial {
        match self {
            Axis::X0 => Monomial::new(1, 0),
            Axis::X1 => Monomial::new(0, 1),
        }
    }
}

/// Exponent pair `x0^m0 x1^m1`, ordered by total degree then `m0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub m0: u32,
    pub m1: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { m0: 0, m1: 0 };

    pub const fn new(m0: u32, m1: u32) -> Self {
        Self { m0, m1 }
    }

    pub fn degree(self) -> u32 {
        self.m0 + self.m1
    }

    pub fn get(self, axis: Axis) -> u32 {
        match axis {
            Axis::X0 => self.m0,
            Axis::X1 => self.m1,
        }
    }

    pub fn checked_sub(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial::new(self.m0.checked_sub(other.m0)?, self.m1.checked_sub(other.m1)?))
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.m0 <= other.m0 && self.m1 <= other.m1
    }

    /// All exponents of total degree `<= order`, in canonical order.
    pub fn up_to(order: u32) -> impl Iterator<Item = Monomial> {
        (0..=order).flat_map(|d| (0..=d).map(move |a| Monomial::new(a, d - a)))
    }
}

impl std::ops::Add for Monomial {
    type Output = Monomial;

    fn add(self, o: Monomial) -> Monomial {
        Monomial::new(self.m0 + o.m0, self.m1 + o.m1)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.m0).cmp(&(other.degree(), other.m0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.m0, self.m1)
    }
}

/// Serialized coefficient: `{"e": [m0, m1], "v": "num/den"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub e: [u32; 2],
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    order: u32,
    coeffs: BTreeMap<Monomial, ExactRat>,
}

impl BiSeries {
    pub fn zero(order: u32) -> Self {
        Self { order, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: ExactRat, order: u32) -> Self {
        Self::monomial(Monomial::ONE, c, order)
    }

    pub fn one(order: u32) -> Self {
        Self::constant(ExactRat::one(), order)
    }

    pub fn monomial(m: Monomial, c: ExactRat, order: u32) -> Self {
        let mut s = Self::zero(order);
        s.add_term(m, c);
        s
    }

    /// The coordinate function `x0` or `x1`.
    pub fn var(axis: Axis, order: u32) -> Self {
        Self::monomial(axis.unit(), ExactRat::one(), order)
    }

    pub fn from_terms(order: u32, terms: impl IntoIterator<Item = (Monomial, ExactRat)>) -> Self {
        let mut s = Self::zero(order);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Adds `c x^m`; terms above the order are dropped.
    pub fn add_term(&mut self, m: Monomial, c: ExactRat) {
        if m.degree() > self.order || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_insert_with(ExactRat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, m: Monomial) -> Option<&ExactRat> {
        self.coeffs.get(&m)
    }

    pub fn coeff(&self, m0: u32, m1: u32) -> ExactRat {
        self.get(Monomial::new(m0, m1)).cloned().unwrap_or_else(ExactRat::zero)
    }

    pub fn constant_term(&self) -> ExactRat {
        self.coeff(0, 0)
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &ExactRat)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            order,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.degree() <= order).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(Monomial, &ExactRat) -> ExactRat) -> Self {
        Self::from_terms(self.order, self.terms().map(|(m, c)| (m, f(m, c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(other.order);
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| -c)
    }

    pub fn scale(&self, s: &ExactRat) -> Self {
        if s.is_zero() {
            return Self::zero(self.order);
        }
        self.map_coeffs(|_, c| c * s)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<Monomial, ExactRat> = BTreeMap::new();
        for (a, ca) in self.terms() {
            if a.degree() > order {
                break;
            }
            for (b, cb) in other.terms() {
                if a.degree() + b.degree() > order {
                    break;
                }
                *acc.entry(a + b).or_insert_with(ExactRat::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Self { order, coeffs: acc }
    }

    /// Multiplies by `x^m`; the order grows by `deg m`.
    pub fn shift(&self, m: Monomial) -> Self {
        Self {
            order: self.order + m.degree(),
            coeffs: self.coeffs.iter().map(|(e, c)| (*e + m, c.clone())).collect(),
        }
    }

    /// Exact division by `x^m`.
    pub fn unshift(&self, m: Monomial) -> Result<Self, SeriesError> {
        if m.degree() > self.order {
            return Err(SeriesError::InsufficientOrder { needed: m.degree(), have: self.order });
        }
        let mut coeffs = BTreeMap::new();
        for (e, c) in self.terms() {
            let q = e.checked_sub(m).ok_or_else(|| SeriesError::NotDivisible(format!("x^({m})")))?;
            coeffs.insert(q, c.clone());
        }
        Ok(Self { order: self.order - m.degree(), coeffs })
    }

    /// `self / t` for `t` with nonzero constant term.
    pub fn div_unit(&self, t: &Self) -> Result<Self, SeriesError> {
        let t0 = t.get(Monomial::ONE).ok_or(SeriesError::NonInvertible)?.clone();
        let order = self.order.min(t.order);
        let rest: Vec<(Monomial, &ExactRat)> = t.terms().filter(|(m, _)| *m != Monomial::ONE).collect();
        let mut out = Self::zero(order);
        for e in Monomial::up_to(order) {
            let mut acc = self.get(e).cloned().unwrap_or_else(ExactRat::zero);
            for (m, c) in &rest {
                if m.degree() > e.degree() {
                    break;
                }
                if let Some(u) = e.checked_sub(*m).and_then(|q| out.get(q)) {
                    acc -= *c * u;
                }
            }
            if !acc.is_zero() {
                out.coeffs.insert(e, acc / &t0);
            }
        }
        Ok(out)
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        Self::one(self.order).div_unit(self)
    }

    /// `exp(self)` for a series with zero constant term, by Horner over
    /// `1 + S(1 + S/2(1 + S/3(...)))`.
    pub fn exp_nil(&self) -> Result<Self, SeriesError> {
        if self.get(Monomial::ONE).is_some() {
            return Err(SeriesError::NonNilpotent);
        }
        let mut acc = Self::one(self.order);
        for r in (1..=self.order.max(1)).rev() {
            acc = Self::one(self.order).add(&self.mul(&acc).scale(&ExactRat::new(1.into(), r.into())));
        }
        Ok(acc)
    }

    /// `log(self)` for a series with constant term one, from
    /// `E(log S) = E(S) / S` with `E = θ0 + θ1`.
    pub fn log_unit(&self) -> Result<Self, SeriesError> {
        if self.constant_term() != ExactRat::one() {
            return Err(SeriesError::NonUnit);
        }
        let euler = self.map_coeffs(|m, c| c * ExactRat::from_integer(m.degree().into()));
        let q = euler.div_unit(self)?;
        Ok(q.map_coeffs(|m, c| c / ExactRat::from_integer(m.degree().into())))
    }

    /// `θ_i = x_i ∂/∂x_i`.
    pub fn theta(&self, axis: Axis) -> Self {
        self.map_coeffs(|m, c| c * ExactRat::from_integer(m.get(axis).into()))
    }

    /// `self(u, v)` for `u`, `v` without constant term.
    pub fn substitute_pair(&self, u: &Self, v: &Self) -> Result<Self, SeriesError> {
        if u.get(Monomial::ONE).is_some() || v.get(Monomial::ONE).is_some() {
            return Err(SeriesError::NonNilpotent);
        }
        let order = self.order.min(u.order).min(v.order);
        let max_a = self.terms().map(|(m, _)| m.m0).max().unwrap_or(0);
        let max_b = self.terms().map(|(m, _)| m.m1).max().unwrap_or(0).min(order);
        let mut vpow = vec![Self::one(order)];
        for b in 1..=max_b as usize {
            let next = vpow[b - 1].mul(v);
            vpow.push(next);
        }
        let inner = |a: u32| {
            let mut s = Self::zero(order);
            for (m, c) in self.terms().filter(|(m, _)| m.m0 == a && m.m1 <= max_b) {
                for (e, x) in vpow[m.m1 as usize].terms() {
                    s.add_term(e, c * x);
                }
            }
            s
        };
        let mut acc = inner(max_a);
        for a in (0..max_a).rev() {
            acc = acc.mul(u).add(&inner(a));
        }
        Ok(acc.truncate(order))
    }

    pub fn to_records(&self) -> Vec<SeriesRecord> {
        self.terms().map(|(m, c)| SeriesRecord { e: [m.m0, m.m1], v: format_rat(c) }).collect()
    }

    pub fn from_records(order: u32, records: &[SeriesRecord]) -> Result<Self, SeriesError> {
        let mut s = Self::zero(order);
        for r in records {
            s.add_term(Monomial::new(r.e[0], r.e[1]), parse_rat(&r.v)?);
        }
        Ok(s)
    }
}

impl fmt::Display for BiSeries {
    /// Degree-bracketed text such as `x0 + (x0^2 - x0*x1) + O(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut groups: Vec<String> = Vec::new();
        for d in 0..=self.order {
            let parts: Vec<(Monomial, &ExactRat)> = self.terms().filter(|(m, _)| m.degree() == d).collect();
            if parts.is_empty() {
                continue;
            }
            let mut s = String::new();
            for (i, (m, c)) in parts.iter().enumerate() {
                let neg = c.numer() < &0.into();
                let mag = if neg { -(*c).clone() } else { (*c).clone() };
                if i == 0 {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                s.push_str(&term_text(*m, &mag));
            }
            groups.push(if parts.len() > 1 { format!("({s})") } else { s });
        }
        if groups.is_empty() {
            groups.push("0".into());
        }
        write!(f, "{} + O({})", groups.join(" + "), self.order + 1)
    }
}

fn term_text(m: Monomial, mag: &ExactRat) -> String {
    let mut vars = Vec::new();
    for (name, p) in [("x0", m.m0), ("x1", m.m1)] {
        match p {
            0 => {}
            1 => vars.push(name.to_string()),
            _ => vars.push(format!("{name}^{p}")),
        }
    }
    let c = format_rat(mag);
    match (vars.is_empty(), mag.is_one()) {
        (true, _) => c,
        (false, true) => vars.join("*"),
        (false, false) => format!("{c}*{}", vars.join("*")),
    }
}
