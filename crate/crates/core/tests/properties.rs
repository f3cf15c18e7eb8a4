use ocmirror::geometry::{charge_vectors, enumerate_solutions, weight_system, Phase};
use ocmirror::scalars::{format_rat, parse_rat, ExactRat};
use ocmirror::series::{revert_pair, Axis, BiSeries, Monomial};
use proptest::prelude::*;

const N: u32 = 5;

fn series(constant: bool) -> impl Strategy<Value = BiSeries> {
    prop::collection::vec((0u32..=N, 0u32..=N, -6i64..=6, 1i64..=3), 0..8).prop_map(move |terms| {
        BiSeries::from_terms(
            N,
            terms
                .into_iter()
                .filter(|&(a, b, _, _)| a + b <= N && (constant || a + b > 0))
                .map(|(a, b, n, d)| (Monomial::new(a, b), ExactRat::new(n.into(), d.into()))),
        )
    })
}

proptest! {
    #[test]
    fn ring_laws(a in series(true), b in series(true), c in series(true)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exp_inverts_log(s in series(false)) {
        let unit = BiSeries::one(N).add(&s);
        prop_assert_eq!(unit.log_unit().unwrap().exp_nil().unwrap(), unit.clone());
        prop_assert_eq!(unit.recip().unwrap().mul(&unit), BiSeries::one(N));
    }

    #[test]
    fn reversion_composes_to_identity(a in series(false), b in series(false)) {
        let one = BiSeries::one(N);
        let q0 = BiSeries::var(Axis::X0, N).mul(&one.add(&a));
        let q1 = BiSeries::var(Axis::X1, N).mul(&one.add(&b));
        let (x0, x1) = revert_pair(&q0, &q1).unwrap();
        prop_assert_eq!(q0.substitute_pair(&x0, &x1).unwrap(), BiSeries::var(Axis::X0, N));
        prop_assert_eq!(q1.substitute_pair(&x0, &x1).unwrap(), BiSeries::var(Axis::X1, N));
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let v = ExactRat::new(n.into(), d.into());
        prop_assert_eq!(parse_rat(&format_rat(&v)).unwrap(), v);
    }
}

#[test]
fn charge_rows_sum_to_zero() {
    let phases = [Phase::CompactLargeVolume, Phase::CompactTilde, Phase::LocalOuter, Phase::LocalInnerA, Phase::LocalInnerB];
    for n in 2..=4 {
        for sol in enumerate_solutions(n, false).unwrap() {
            for brane in 1..=n {
                let ws = weight_system(&sol, brane).unwrap();
                for phase in phases {
                    let cv = charge_vectors(&ws, phase);
                    for row in &cv.rows {
                        assert_eq!(row.len(), n + 3);
                        assert_eq!(row.iter().sum::<i64>(), 0, "{ws} {phase} {row:?}");
                    }
                }
            }
        }
    }
}
