//! Exact integers and rationals plus the combinatorial sequences built on them.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::WeightSystem;

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("lcm of an empty list")]
    Empty,
    #[error("lcm argument must be positive, got {0}")]
    NonPositive(u64),
    #[error("malformed rational {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn int(v: i64) -> ExactRat {
    ExactRat::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> ExactRat {
    ExactRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn lcm_of(values: &[u64]) -> Result<ExactInt, ScalarError> {
    if values.is_empty() {
        return Err(ScalarError::Empty);
    }
    let mut acc = BigInt::one();
    for &v in values {
        if v == 0 {
            return Err(ScalarError::NonPositive(v));
        }
        acc = acc.lcm(&BigInt::from(v));
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> ExactInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u64]) -> ExactInt {
    let mut acc = BigInt::one();
    let mut total = 0u64;
    for &p in parts {
        for j in 1..=p {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

/// `F(m) = (km)! / Π (w_i m)!` for `m = 0..=count`.
pub fn factorial_ratio_seq(ws: &WeightSystem, count: usize) -> Vec<ExactInt> {
    let k = ws.k();
    let mut out = Vec::with_capacity(count + 1);
    let mut cur = BigInt::one();
    out.push(cur.clone());
    for m in 1..=count as u64 {
        let mut num = cur;
        for j in 1..=k {
            num *= k * (m - 1) + j;
        }
        let mut den = BigInt::one();
        for &w in ws.weights() {
            for j in 1..=w {
                den *= w * (m - 1) + j;
            }
        }
        cur = num / den;
        out.push(cur.clone());
    }
    out
}

static HARMONICS: RwLock<Vec<ExactRat>> = RwLock::new(Vec::new());

/// `H_n = Σ_{j=1}^n 1/j`, served from a shared prefix table.
pub fn harmonic(n: u64) -> ExactRat {
    let n = n as usize;
    {
        let table = HARMONICS.read().unwrap_or_else(|e| e.into_inner());
        if let Some(h) = table.get(n) {
            return h.clone();
        }
    }
    let mut table = HARMONICS.write().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(ExactRat::zero());
    }
    while table.len() <= n {
        let j = table.len() as i64;
        let next = table.last().unwrap() + ratio(1, j);
        table.push(next);
    }
    table[n].clone()
}

/// Canonical `num/den` text, or just `num` for integers.
pub fn format_rat(v: &ExactRat) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<ExactRat, ScalarError> {
    let bad = || ScalarError::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = n.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match d {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ScalarError::ZeroDenominator(s.to_string()));
    }
    Ok(ExactRat::new(num, den))
}

pub fn is_integral(v: &ExactRat) -> bool {
    v.is_integer()
}
