//! Exponents `α` in `Q_i = q_i Π_m (1 - q^m)^{α_m}` relating two maps.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{MapError, MirrorMapBundle};
use crate::geometry::Phase;
use crate::scalars::{format_rat, ExactRat};
use crate::series::{revert_pair, Axis, BiSeries, Monomial, SeriesError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Local variables in terms of compact ones.
    Alpha,
    /// Compact variables in terms of local ones.
    Beta,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Alpha => "alpha",
            Direction::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFormExponents {
    pub direction: Direction,
    pub which: Axis,
    pub order: u32,
    /// Nonzero exponents; every other `m` has exponent zero.
    pub table: BTreeMap<Monomial, ExactRat>,
}

impl ProductFormExponents {
    pub fn get(&self, m0: u32, m1: u32) -> ExactRat {
        self.table.get(&Monomial::new(m0, m1)).cloned().unwrap_or_else(ExactRat::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.table.values().all(|v| v.is_integer())
    }

    /// `Π (1 - q^m)^{α_m}` expanded to the table order.
    pub fn expand(&self) -> Result<BiSeries, SeriesError> {
        let mut log = BiSeries::zero(self.order);
        for (m, a) in &self.table {
            let mut r = 1u32;
            while m.degree() * r <= self.order {
                let e = Monomial::new(m.m0 * r, m.m1 * r);
                log.add_term(e, -a / ExactRat::from_integer(r.into()));
                r += 1;
            }
        }
        log.exp_nil()
    }
}

/// Solves `Q_i / q_i = Π_{0 < |m| <= order} (1 - q^m)^{α_m}` where `q` comes
/// from `from` and `Q` from `to`, both maps of the same variables `x`.
///
/// Both bundles need order at least `order + 1`.
pub fn product_form_exponents(
    from: &MirrorMapBundle,
    to: &MirrorMapBundle,
    order: u32,
    which: Axis,
) -> Result<ProductFormExponents, MapError> {
    let need = order + 1;
    let have = from.order.min(to.order);
    if have < need {
        return Err(SeriesError::InsufficientOrder { needed: need, have }.into());
    }
    let direction = if from.phase.is_local() && to.phase == Phase::CompactLargeVolume {
        Direction::Beta
    } else {
        Direction::Alpha
    };
    let (x0, x1) = revert_pair(&from.map(Axis::X0).truncate(need), &from.map(Axis::X1).truncate(need))?;
    let own = match which {
        Axis::X0 => &x0,
        Axis::X1 => &x1,
    };
    let ratio = own
        .unshift(which.unit())?
        .mul(&to.unit(which).truncate(order).substitute_pair(&x0, &x1)?);
    if !ratio.constant_term().is_one() {
        return Err(MapError::NotUnitRelated { which: which.index(), constant: format_rat(&ratio.constant_term()) });
    }
    let log = ratio.log_unit()?;
    let mut rest: BTreeMap<Monomial, ExactRat> = log.terms().map(|(m, c)| (m, c.clone())).collect();
    let mut table = BTreeMap::new();
    for m in Monomial::up_to(order).skip(1) {
        let Some(c) = rest.remove(&m) else { continue };
        let alpha = -c;
        let mut r = 2u32;
        while m.degree() * r <= order {
            let e = Monomial::new(m.m0 * r, m.m1 * r);
            *rest.entry(e).or_insert_with(ExactRat::zero) += &alpha / ExactRat::from_integer(r.into());
            r += 1;
        }
        if !alpha.is_zero() {
            table.insert(m, alpha);
        }
    }
    Ok(ProductFormExponents { direction, which, order, table })
}
