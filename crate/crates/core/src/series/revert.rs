//! Inversion of maps `q_i = x_i u_i(x)` with unit `u_i`.

use num_traits::{One, Zero};

use super::{Axis, BiSeries, Monomial, SeriesError};
use crate::scalars::ExactRat;

/// Unit factor `u` of `q = x_axis u`.
fn unit_factor(q: &BiSeries, axis: Axis) -> Result<BiSeries, SeriesError> {
    let u = q.unshift(axis.unit()).map_err(|_| SeriesError::NotDivisible(format!("x{}", axis.index())))?;
    if u.constant_term() != ExactRat::one() {
        return Err(SeriesError::NonUnit);
    }
    Ok(u)
}

/// Inverts `(q0, q1) = (x0 u0(x), x1 u1(x))`, returning `x0(q)`, `x1(q)` at
/// the smaller input order.
///
/// Fixed point `x_i <- q_i / u_i(x)`; each pass fixes one more degree, so
/// pass `p` only works to order `p`.
pub fn revert_pair(q0: &BiSeries, q1: &BiSeries) -> Result<(BiSeries, BiSeries), SeriesError> {
    let u0 = unit_factor(q0, Axis::X0)?;
    let u1 = unit_factor(q1, Axis::X1)?;
    let order = q0.order().min(q1.order());
    let mut x0 = BiSeries::var(Axis::X0, order.min(1));
    let mut x1 = BiSeries::var(Axis::X1, order.min(1));
    for p in 2..=order {
        let (t0, t1) = (x0.truncate(p - 1), x1.truncate(p - 1));
        let v0 = u0.truncate(p - 1).substitute_pair(&t0, &t1)?.recip()?;
        let v1 = u1.truncate(p - 1).substitute_pair(&t0, &t1)?.recip()?;
        x0 = v0.shift(Axis::X0.unit());
        x1 = v1.shift(Axis::X1.unit());
    }
    Ok((x0, x1))
}

/// Coefficient of `q0^m0 q1^m1` in `x_which(q)` where `q_i = x_i exp(h_i(x))`.
///
/// Two-variable Lagrange-Good: the coefficient is
/// `[x^(m - e_which)] det(δ_ij + θ_j h_i) exp(-m0 h0 - m1 h1)`.
pub fn lagrange_good_coeff(m0: u32, m1: u32, h0: &BiSeries, h1: &BiSeries, which: Axis) -> Result<ExactRat, SeriesError> {
    let Some(target) = Monomial::new(m0, m1).checked_sub(which.unit()) else {
        return Ok(ExactRat::zero());
    };
    let d = target.degree();
    let have = h0.order().min(h1.order());
    if d > have {
        return Err(SeriesError::InsufficientOrder { needed: d, have });
    }
    let (h0, h1) = (h0.truncate(d), h1.truncate(d));
    let one = BiSeries::one(d);
    let jac = one
        .add(&h0.theta(Axis::X0))
        .mul(&one.add(&h1.theta(Axis::X1)))
        .sub(&h0.theta(Axis::X1).mul(&h1.theta(Axis::X0)));
    let m = |v: u32| ExactRat::from_integer(v.into());
    let e = h0.scale(&m(m0)).add(&h1.scale(&m(m1))).neg().exp_nil()?;
    let mut acc = ExactRat::zero();
    for (f, c) in jac.terms() {
        if let Some(g) = target.checked_sub(f).and_then(|g| e.get(g)) {
            acc += c * g;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn reverts_scaled_geometric_map() {
        // q0 = x0 / (1 - x1), q1 = x1  =>  x0 = q0 (1 - q1)
        let order = 5;
        let geo = BiSeries::from_terms(order, (0..order).map(|j| (Monomial::new(1, j), int(1))));
        let (x0, x1) = revert_pair(&geo, &BiSeries::var(Axis::X1, order)).unwrap();
        let expect = BiSeries::from_terms(order, [(Monomial::new(1, 0), int(1)), (Monomial::new(1, 1), int(-1))]);
        assert_eq!(x0, expect);
        assert_eq!(x1, BiSeries::var(Axis::X1, order));
    }

    #[test]
    fn rejects_non_unit_maps() {
        let bad = BiSeries::monomial(Monomial::new(1, 0), int(2), 3);
        assert_eq!(revert_pair(&bad, &BiSeries::var(Axis::X1, 3)), Err(SeriesError::NonUnit));
        let bad = BiSeries::var(Axis::X1, 3);
        assert!(matches!(revert_pair(&bad, &bad), Err(SeriesError::NotDivisible(_))));
    }

    #[test]
    fn lagrange_good_needs_order() {
        let h = BiSeries::zero(2);
        assert!(matches!(lagrange_good_coeff(2, 2, &h, &h, Axis::X0), Err(SeriesError::InsufficientOrder { .. })));
        assert_eq!(lagrange_good_coeff(1, 0, &h, &h, Axis::X0).unwrap(), int(1));
        assert_eq!(lagrange_good_coeff(0, 2, &h, &h, Axis::X0).unwrap(), int(0));
    }
}
