//! Unit-fraction partitions, weight systems, phases, charge vectors and
//! Picard-Fuchs operators.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::series::{Monomial, ThetaOperator, ThetaPoly};

pub const MAX_N: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("n must lie in 2..={MAX_N}, got {0}")]
    BadLength(usize),
    #[error("{0}")]
    NotUnitPartition(String),
    #[error("brane index {index} out of range 1..={n}")]
    BadBraneIndex { index: usize, n: usize },
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("unknown phase {0:?}")]
    UnknownPhase(String),
    #[error("malformed integer list {0:?}")]
    Parse(String),
}

/// Positive integers `k_1..k_n` with `Σ 1/k_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionSolution {
    ks: Vec<u64>,
}

impl PartitionSolution {
    pub fn new(ks: Vec<u64>) -> Result<Self, GeometryError> {
        if ks.len() < 2 || ks.len() > MAX_N {
            return Err(GeometryError::BadLength(ks.len()));
        }
        if ks.contains(&0) || !sums_to_one(&ks) {
            let terms: Vec<String> = ks.iter().map(|k| format!("1/{k}")).collect();
            return Err(GeometryError::NotUnitPartition(format!("{} ≠ 1", terms.join("+"))));
        }
        Ok(Self { ks })
    }

    pub fn ks(&self) -> &[u64] {
        &self.ks
    }

    pub fn n(&self) -> usize {
        self.ks.len()
    }
}

impl TryFrom<Vec<u64>> for PartitionSolution {
    type Error = GeometryError;

    fn try_from(ks: Vec<u64>) -> Result<Self, Self::Error> {
        Self::new(ks)
    }
}

impl FromStr for PartitionSolution {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_list(s)?)
    }
}

impl fmt::Display for PartitionSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ks.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn parse_list(s: &str) -> Result<Vec<u64>, GeometryError> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| GeometryError::Parse(s.to_string())))
        .collect()
}

fn sums_to_one(ks: &[u64]) -> bool {
    // Σ 1/k_i = 1  ⇔  Σ L/k_i = L with L = lcm.
    let l = ks.iter().fold(1u128, |acc, &k| acc.lcm(&(k as u128)));
    ks.iter().map(|&k| l / k as u128).sum::<u128>() == l
}

/// `k = lcm(k_i)` and weights `w_i = k / k_i`; `w[0]` is the brane weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    k: u64,
    ws: Vec<u64>,
}

impl WeightSystem {
    /// Builds `(k | w_1..w_n)` directly, checking `Σ w_i = k` and `w_i | k`.
    pub fn from_weights(k: u64, ws: Vec<u64>) -> Result<Self, GeometryError> {
        let bad = |why: &str| Err(GeometryError::BadWeights(format!("({k}|{ws:?}): {why}")));
        if ws.len() < 2 || ws.len() > MAX_N {
            return Err(GeometryError::BadLength(ws.len()));
        }
        if ws.contains(&0) {
            return bad("zero weight");
        }
        if ws.iter().sum::<u64>() != k {
            return bad("weights must sum to k");
        }
        if ws.iter().any(|w| !k.is_multiple_of(*w)) {
            return bad("every weight must divide k");
        }
        let l = ws.iter().fold(1u64, |acc, &w| acc.lcm(&(k / w)));
        if l != k {
            return bad("k must equal lcm(k/w_i)");
        }
        Ok(Self { k, ws })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn weights(&self) -> &[u64] {
        &self.ws
    }

    pub fn w1(&self) -> u64 {
        self.ws[0]
    }

    pub fn n(&self) -> usize {
        self.ws.len()
    }

    /// Weights other than the brane weight.
    pub fn rest(&self) -> &[u64] {
        &self.ws[1..]
    }

    pub fn ks(&self) -> Vec<u64> {
        self.ws.iter().map(|w| self.k / w).collect()
    }

    /// Key identifying the system up to reordering of `w_2..w_n`.
    pub fn canonical_key(&self) -> (u64, u64, Vec<u64>) {
        let mut rest = self.rest().to_vec();
        rest.sort_unstable();
        (self.k, self.w1(), rest)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ws.iter().map(u64::to_string).collect();
        write!(f, "({}|{})", self.k, parts.join(","))
    }
}

/// Weight system with `k_index` (1-based) moved to the brane slot.
pub fn weight_system(ks: &PartitionSolution, brane_index: usize) -> Result<WeightSystem, GeometryError> {
    let n = ks.n();
    if brane_index == 0 || brane_index > n {
        return Err(GeometryError::BadBraneIndex { index: brane_index, n });
    }
    let k = ks.ks().iter().fold(1u64, |acc, &x| acc.lcm(&x));
    let mut order = vec![brane_index - 1];
    order.extend((0..n).filter(|&i| i != brane_index - 1));
    let ws = order.iter().map(|&i| k / ks.ks()[i]).collect();
    Ok(WeightSystem { k, ws })
}

/// All solutions of `Σ 1/k_i = 1` with `n` terms, sorted lexicographically.
/// Unordered mode lists every distinct permutation.
pub fn enumerate_solutions(n: usize, ordered: bool) -> Result<Vec<PartitionSolution>, GeometryError> {
    if !(2..=MAX_N).contains(&n) {
        return Err(GeometryError::BadLength(n));
    }
    let mut found = Vec::new();
    let mut cur = Vec::with_capacity(n);
    search(1, 1, n, 1, &mut cur, &mut found);
    if !ordered {
        let mut all = Vec::new();
        for ks in &found {
            permutations(ks, &mut all);
        }
        found = all;
    }
    found.sort();
    found.dedup();
    Ok(found.into_iter().map(|ks| PartitionSolution { ks }).collect())
}

// Remaining fraction p/q to be split into `left` terms, each >= lo.
fn search(p: u128, q: u128, left: usize, lo: u128, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if left == 1 {
        if q.is_multiple_of(p) && q / p >= lo {
            cur.push((q / p) as u64);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    let start = lo.max(q.div_ceil(p));
    let end = (left as u128 * q) / p;
    for k in start..=end {
        let np = p * k - q;
        if np == 0 {
            continue;
        }
        let nq = q * k;
        let g = np.gcd(&nq);
        cur.push(k as u64);
        search(np / g, nq / g, left - 1, k, cur, out);
        cur.pop();
    }
}

fn permutations(sorted: &[u64], out: &mut Vec<Vec<u64>>) {
    let mut v = sorted.to_vec();
    loop {
        out.push(v.clone());
        // next lexicographic permutation
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
    }
}

/// Moduli regimes of the open-closed system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    CompactLargeVolume,
    CompactTilde,
    LocalOuter,
    LocalInnerA,
    LocalInnerB,
}

impl Phase {
    pub const ALL: [Phase; 5] = [
        Phase::CompactLargeVolume,
        Phase::CompactTilde,
        Phase::LocalOuter,
        Phase::LocalInnerA,
        Phase::LocalInnerB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::CompactLargeVolume => "compact",
            Phase::CompactTilde => "compact-tilde",
            Phase::LocalOuter => "local-outer",
            Phase::LocalInnerA => "local-inner-a",
            Phase::LocalInnerB => "local-inner-b",
        }
    }

    pub fn is_local(self) -> bool {
        matches!(self, Phase::LocalOuter | Phase::LocalInnerA | Phase::LocalInnerB)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Phase {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Phase::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| GeometryError::UnknownPhase(s.to_string()))
    }
}

/// Rows of the charge matrix; each row has `n + 3` entries
/// `(a_0 | a_1..a_n | a_{n+1}, a_{n+2})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeVectorSet {
    pub phase: Phase,
    pub rows: Vec<Vec<i64>>,
}

pub fn charge_vectors(ws: &WeightSystem, phase: Phase) -> ChargeVectorSet {
    let k = ws.k() as i64;
    let w: Vec<i64> = ws.weights().iter().map(|&x| x as i64).collect();
    let n = w.len();
    let row = |a0: i64, body: Vec<i64>, t0: i64, t1: i64| {
        let mut r = vec![a0];
        r.extend(body);
        r.extend([t0, t1]);
        r
    };
    let unit = |c: i64| {
        let mut b = vec![0; n];
        b[0] = c;
        b
    };
    let rows = match phase {
        Phase::CompactLargeVolume | Phase::LocalInnerB => {
            let mut body = w.clone();
            body[0] = 0;
            vec![row(-k + w[0], body, w[0], -w[0]), row(-1, unit(1), -1, 1)]
        }
        Phase::CompactTilde => vec![row(-k, w.clone(), 0, 0), row(-1, unit(1), -1, 1)],
        Phase::LocalOuter => vec![row(-k, w.clone(), 0, 0), row(1, unit(-1), 1, -1)],
        Phase::LocalInnerA => {
            let mut body = w.clone();
            body[0] -= 1;
            vec![row(-k + 1, body, -1, 1), row(-1, unit(1), 1, -1)]
        }
    };
    ChargeVectorSet { phase, rows }
}

fn lin(c: i64, c0: i64, c1: i64) -> ThetaPoly {
    ThetaPoly::affine(c, c0, c1)
}

/// `Π_{j in js} (c0 θ0 + c1 θ1 + sign·j)`.
fn falling(c0: i64, c1: i64, sign: i64, js: impl IntoIterator<Item = u64>) -> ThetaPoly {
    ThetaPoly::product(js.into_iter().map(|j| lin(sign * j as i64, c0, c1)))
}

/// `Π_{i>=2} Π_{j<w_i} (w_i θ1 - j)`.
fn rest_block(ws: &WeightSystem) -> ThetaPoly {
    ThetaPoly::product(ws.rest().iter().map(|&w| falling(0, w as i64, -1, 0..w)))
}

fn op(terms: Vec<((u32, u32), ThetaPoly)>) -> ThetaOperator {
    ThetaOperator::new(terms.into_iter().map(|((a, b), p)| (Monomial::new(a, b), p)).collect())
}

/// Picard-Fuchs operators of the phase, fully expanded.
///
/// The tilde operator carrying `x0^{-w1}` is returned multiplied on the left
/// by `x0^{w1}` so every shift is a nonnegative monomial; the kernel is
/// unchanged.
pub fn pf_operators(ws: &WeightSystem, phase: Phase) -> Vec<ThetaOperator> {
    let k = ws.k() as i64;
    let w1 = ws.w1() as i64;
    let uw1 = ws.w1();
    let uk = ws.k();
    let rest = rest_block(ws);
    match phase {
        Phase::CompactLargeVolume => {
            let right = lin(0, 1, -w1);
            let l0 = op(vec![
                ((0, 0), lin(0, 1, 0).mul(&right)),
                ((1, 0), lin(1, 1, k - w1).mul(&right).neg()),
            ]);
            let l1 = op(vec![
                ((0, 0), rest.mul(&falling(-1, w1, -1, 0..uw1))),
                ((0, 1), falling(1, k - w1, 1, 1..=uk - uw1).mul(&falling(-1, w1, 1, 0..uw1)).neg()),
            ]);
            let l1p = op(vec![
                ((0, 0), falling(1, 0, -1, 0..uw1).mul(&rest)),
                ((uw1 as u32, 1), falling(1, k - w1, 1, 1..=uk).neg()),
            ]);
            vec![l0, l1, l1p]
        }
        Phase::CompactTilde => {
            let right = lin(0, 1, 0);
            let l0 = op(vec![
                ((0, 0), lin(0, 1, w1).mul(&right)),
                ((1, 0), lin(1, 1, k).mul(&right).neg()),
            ]);
            let l1 = op(vec![
                ((uw1 as u32, 0), rest.mul(&falling(-1, 0, -1, 0..uw1))),
                ((0, 1), falling(1, k, 1, 1..=uk - uw1).mul(&falling(-1, 0, 1, 0..uw1)).neg()),
            ]);
            let l1p = op(vec![
                ((0, 0), falling(1, w1, -1, 0..uw1).mul(&rest)),
                ((0, 1), falling(1, k, 1, 1..=uk).neg()),
            ]);
            vec![l0, l1, l1p]
        }
        Phase::LocalOuter => {
            let l0 = op(vec![
                ((0, 0), lin(0, 1, 0).mul(&lin(0, 1, -k))),
                ((1, 0), lin(0, 1, 0).mul(&lin(0, 1, -w1)).neg()),
            ]);
            let sign = if uk.is_multiple_of(2) { -1 } else { 1 };
            let l1 = op(vec![
                ((0, 0), falling(-1, w1, -1, 0..uw1).mul(&rest)),
                ((0, 1), falling(1, -k, -1, 0..uk).scale_int(sign)),
            ]);
            vec![l0, l1]
        }
        Phase::LocalInnerA => {
            let diff = lin(0, 1, -1);
            let l0 = op(vec![
                ((0, 0), diff.mul(&lin(0, 1, w1 - 1))),
                ((1, 0), diff.neg().mul(&lin(0, -1, -(k - 1))).neg()),
            ]);
            let l1 = op(vec![
                ((0, 0), diff.mul(&falling(1, w1 - 1, -1, 0..uw1 - 1)).mul(&rest)),
                ((0, 1), diff.neg().mul(&falling(1, k - 1, 1, 0..uk - 1)).neg()),
            ]);
            vec![l0, l1]
        }
        Phase::LocalInnerB => {
            let right = lin(0, 1, -w1);
            let l0 = op(vec![
                ((0, 0), lin(0, 1, 0).mul(&right)),
                ((1, 0), lin(0, 1, k - w1).mul(&right).neg()),
            ]);
            let l1 = op(vec![
                ((0, 0), rest.mul(&falling(-1, w1, -1, 0..uw1))),
                ((0, 1), falling(1, k - w1, 1, 0..uk - uw1).mul(&falling(-1, w1, 1, 0..uw1)).neg()),
            ]);
            let l1p = op(vec![
                ((0, 0), falling(1, 0, -1, 0..uw1).mul(&rest)),
                ((uw1 as u32, 1), falling(1, k - w1, 1, 0..uk).neg()),
            ]);
            vec![l0, l1, l1p]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(ks: &[u64]) -> PartitionSolution {
        PartitionSolution::new(ks.to_vec()).unwrap()
    }

    fn brute_force_count(n: usize) -> usize {
        // Independent search: k_i <= n-i+1 times the bound from the previous
        // partial sum, using exact fractions through cross-multiplication.
        fn rec(n: usize, lo: u64, num: u64, den: u64) -> usize {
            // remaining = num/den
            if n == 0 {
                return usize::from(num == 0);
            }
            if num == 0 {
                return 0;
            }
            let mut c = 0;
            let mut k = lo;
            while k * num <= n as u64 * den {
                if k * num >= den {
                    let nn = num * k - den;
                    let nd = den * k;
                    let g = num_integer::gcd(nn, nd).max(1);
                    c += rec(n - 1, k, nn / g, nd / g);
                }
                k += 1;
            }
            c
        }
        rec(n, 1, 1, 1)
    }

    #[test]
    fn small_enumerations() {
        let n3 = enumerate_solutions(3, true).unwrap();
        assert_eq!(n3, vec![sol(&[2, 3, 6]), sol(&[2, 4, 4]), sol(&[3, 3, 3])]);
        assert_eq!(enumerate_solutions(2, true).unwrap(), vec![sol(&[2, 2])]);
        assert_eq!(enumerate_solutions(3, false).unwrap().len(), 10);
    }

    #[test]
    fn counts_agree_with_independent_search() {
        for n in 2..=5 {
            assert_eq!(enumerate_solutions(n, true).unwrap().len(), brute_force_count(n), "n={n}");
        }
        assert_eq!(enumerate_solutions(4, true).unwrap().len(), 14);
        assert_eq!(enumerate_solutions(5, true).unwrap().len(), 147);
    }

    #[test]
    fn every_solution_sums_to_one() {
        for s in enumerate_solutions(5, true).unwrap() {
            assert!(sums_to_one(s.ks()));
            assert!(s.ks().windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(enumerate_solutions(1, true), Err(GeometryError::BadLength(1)));
        assert_eq!(enumerate_solutions(7, true), Err(GeometryError::BadLength(7)));
        let e = PartitionSolution::new(vec![3, 3, 4]).unwrap_err();
        assert_eq!(e.to_string(), "1/3+1/3+1/4 ≠ 1");
        assert!(weight_system(&sol(&[2, 2]), 3).is_err());
    }

    #[test]
    fn weight_system_rotates_brane() {
        let w = weight_system(&sol(&[6, 2, 3]), 1).unwrap();
        assert_eq!((w.k(), w.weights()), (6, &[1, 3, 2][..]));
        let w = weight_system(&sol(&[2, 4, 4]), 1).unwrap();
        assert_eq!((w.k(), w.weights()), (4, &[2, 1, 1][..]));
        let w = weight_system(&sol(&[2, 4, 4]), 3).unwrap();
        assert_eq!(w.weights(), &[1, 2, 1]);
        assert_eq!(w.ks(), vec![4, 2, 4]);
    }

    #[test]
    fn charge_vectors_of_quadric_pair() {
        let w = WeightSystem::from_weights(2, vec![1, 1]).unwrap();
        let c = charge_vectors(&w, Phase::CompactLargeVolume);
        assert_eq!(c.rows, vec![vec![-1, 0, 1, 1, -1], vec![-1, 1, 0, -1, 1]]);
        let w = WeightSystem::from_weights(5, vec![1; 5]).unwrap();
        let c = charge_vectors(&w, Phase::CompactLargeVolume);
        assert_eq!(c.rows[0], vec![-4, 0, 1, 1, 1, 1, 1, -1]);
    }

    #[test]
    fn charge_rows_sum_to_zero() {
        for s in enumerate_solutions(4, true).unwrap() {
            for idx in 1..=s.n() {
                let w = weight_system(&s, idx).unwrap();
                for p in Phase::ALL {
                    let c = charge_vectors(&w, p);
                    for r in &c.rows {
                        assert_eq!(r.len(), w.n() + 3);
                        assert_eq!(r.iter().sum::<i64>(), 0, "{w} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn quadric_operators_expand_as_expected() {
        let w = WeightSystem::from_weights(2, vec![1, 1]).unwrap();
        let ops = pf_operators(&w, Phase::CompactLargeVolume);
        // L1' = θ0 θ1 - x0 x1 (θ0+θ1+1)(θ0+θ1+2)
        let expect = op(vec![
            ((0, 0), lin(0, 1, 0).mul(&lin(0, 0, 1))),
            ((1, 1), lin(1, 1, 1).mul(&lin(2, 1, 1)).neg()),
        ]);
        assert_eq!(ops[2], expect);
    }

    #[test]
    fn phase_names_round_trip() {
        for p in Phase::ALL {
            assert_eq!(p.name().parse::<Phase>().unwrap(), p);
        }
        assert!("bulk".parse::<Phase>().is_err());
    }
}
