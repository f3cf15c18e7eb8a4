//! Golden coefficients transcribed from printed expansions.

use thiserror::Error;

use crate::geometry::{GeometryError, Phase, WeightSystem};
use crate::scalars::ExactInt;
use crate::series::Monomial;

const CORPUS: &str = include_str!("../../data/golden.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("line {line}: {why}")]
    Malformed { line: usize, why: String },
    #[error("line {line}: {source}")]
    Weights { line: usize, source: GeometryError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    /// `k:w1,...,wn` with the brane weight first.
    pub case: String,
    pub weights: WeightSystem,
    pub phase: Phase,
    pub series: String,
    pub exponent: Monomial,
    pub value: ExactInt,
}

impl Fixture {
    pub fn id(&self) -> String {
        format!("{}|{}|{}|{}", self.case, self.phase, self.series, self.exponent)
    }
}

/// Parses `case|phase|series|m0,m1|value` lines; `#` starts a comment line.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, FixtureError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let bad = |why: &str| FixtureError::Malformed { line, why: why.to_string() };
        let f: Vec<&str> = l.split('|').collect();
        let [case, phase, series, exp, value] = f[..] else {
            return Err(bad("expected five fields"));
        };
        let (k, ws) = case.split_once(':').ok_or_else(|| bad("case must be k:w1,..."))?;
        let k: u64 = k.parse().map_err(|_| bad("bad k"))?;
        let ws = crate::geometry::parse_list(ws).map_err(|source| FixtureError::Weights { line, source })?;
        let weights = WeightSystem::from_weights(k, ws).map_err(|source| FixtureError::Weights { line, source })?;
        let phase: Phase = phase.parse().map_err(|source| FixtureError::Weights { line, source })?;
        let (m0, m1) = exp.split_once(',').ok_or_else(|| bad("exponent must be m0,m1"))?;
        let exponent = Monomial::new(m0.parse().map_err(|_| bad("bad m0"))?, m1.parse().map_err(|_| bad("bad m1"))?);
        let value: ExactInt = value.parse().map_err(|_| bad("bad value"))?;
        out.push(Fixture { case: case.to_string(), weights, phase, series: series.to_string(), exponent, value });
    }
    Ok(out)
}

pub fn golden_corpus() -> Vec<Fixture> {
    parse_fixtures(CORPUS).expect("embedded corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        let c = golden_corpus();
        assert!(c.len() > 800);
        assert!(c.iter().any(|f| f.case == "6:3,2,1" && f.series == "q0"));
    }

    #[test]
    fn malformed_lines_are_reported() {
        assert!(matches!(parse_fixtures("2:1,1|compact|q0|1,0"), Err(FixtureError::Malformed { line: 1, .. })));
        assert!(matches!(parse_fixtures("# c\n3:1,1|compact|q0|1,0|1"), Err(FixtureError::Weights { line: 2, .. })));
        assert!(matches!(parse_fixtures("2:1,1|bulk|q0|1,0|1"), Err(FixtureError::Weights { .. })));
    }
}
