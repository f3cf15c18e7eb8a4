use super::{Axis, BiSeries};
use crate::scalars::ExactRat;

/// `a + b0 log x0 + b1 log x1` with a common truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSeries {
    pub a: BiSeries,
    pub b0: BiSeries,
    pub b1: BiSeries,
}

impl LogSeries {
    pub fn new(a: BiSeries, b0: BiSeries, b1: BiSeries) -> Self {
        let order = a.order().min(b0.order()).min(b1.order());
        Self { a: a.truncate(order), b0: b0.truncate(order), b1: b1.truncate(order) }
    }

    pub fn pure(a: BiSeries) -> Self {
        let o = a.order();
        Self::new(a, BiSeries::zero(o), BiSeries::zero(o))
    }

    /// `g log x_axis`.
    pub fn log_times(axis: Axis, g: BiSeries) -> Self {
        let o = g.order();
        match axis {
            Axis::X0 => Self::new(BiSeries::zero(o), g, BiSeries::zero(o)),
            Axis::X1 => Self::new(BiSeries::zero(o), BiSeries::zero(o), g),
        }
    }

    pub fn order(&self) -> u32 {
        self.a.order()
    }

    pub fn log_coeff(&self, axis: Axis) -> &BiSeries {
        match axis {
            Axis::X0 => &self.b0,
            Axis::X1 => &self.b1,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a.add(&o.a), self.b0.add(&o.b0), self.b1.add(&o.b1))
    }

    pub fn scale(&self, s: &ExactRat) -> Self {
        Self::new(self.a.scale(s), self.b0.scale(s), self.b1.scale(s))
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::new(self.a.truncate(order), self.b0.truncate(order), self.b1.truncate(order))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b0.is_zero() && self.b1.is_zero()
    }
}
